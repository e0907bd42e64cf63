#include "heatlab/model_space.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "heatlab/specfun.hpp"

namespace heatlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMergeRelTol = 1e-12;

std::string fmt_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// C(a, b) for small b, exact in 64-bit; throws on overflow.
std::int64_t binom(std::int64_t a, std::int64_t b) {
    if (b < 0 || b > a) return 0;
    b = std::min(b, a - b);
    unsigned __int128 num = 1;
    for (std::int64_t i = 1; i <= b; ++i) {
        num = num * static_cast<unsigned __int128>(a - b + i) / i;
        if (num > static_cast<unsigned __int128>(INT64_MAX)) {
            throw std::overflow_error("spectrum multiplicity overflows 64 bits");
        }
    }
    return static_cast<std::int64_t>(num);
}

// Multiplicity of the l-th eigenvalue level on the round n-sphere.
std::int64_t sphere_mult(int n, int l) {
    if (l == 0) return 1;
    return binom(l + n, l) - binom(l + n - 2, l - 2);
}

std::vector<SpectralLevel> merge_levels(std::vector<SpectralLevel> raw) {
    std::sort(raw.begin(), raw.end(),
              [](const SpectralLevel& a, const SpectralLevel& b) { return a.mu < b.mu; });
    std::vector<SpectralLevel> out;
    for (const auto& lv : raw) {
        if (!out.empty() &&
            lv.mu - out.back().mu <= kMergeRelTol * std::max(1.0, std::abs(lv.mu))) {
            out.back().mult += lv.mult;
        } else {
            out.push_back(lv);
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i].index = static_cast<int>(i);
    return out;
}

}  // namespace

double angle_diff(double a, double b) {
    double d = std::fmod(std::abs(a - b), 2.0 * kPi);
    return d > kPi ? 2.0 * kPi - d : d;
}

ModelSpace ModelSpace::circle(double r) {
    if (!(r > 0.0)) throw std::invalid_argument("circle: radius must be positive");
    ModelSpace s;
    s.kind_ = Kind::Circle;
    s.dim_ = 1;
    s.radius_ = r;
    return s;
}

ModelSpace ModelSpace::sphere(int n, double k) {
    if (n < 1) throw std::invalid_argument("sphere: dimension must be >= 1");
    if (!(k > 0.0)) throw std::invalid_argument("sphere: radius must be positive");
    if (n == 1) return circle(k);  // one code path for cones over S^1
    ModelSpace s;
    s.kind_ = Kind::Sphere;
    s.dim_ = n;
    s.radius_ = k;
    return s;
}

ModelSpace ModelSpace::euclidean(int n) {
    if (n < 1) throw std::invalid_argument("euclidean: dimension must be >= 1");
    ModelSpace s;
    s.kind_ = Kind::Euclidean;
    s.dim_ = n;
    return s;
}

ModelSpace ModelSpace::half_space(int n) {
    if (n < 1) throw std::invalid_argument("halfspace: dimension must be >= 1");
    ModelSpace s;
    s.kind_ = Kind::HalfSpace;
    s.dim_ = n;
    return s;
}

ModelSpace ModelSpace::product(const ModelSpace& left, const ModelSpace& right) {
    ModelSpace s;
    s.kind_ = Kind::Product;
    s.dim_ = left.dim() + right.dim();
    s.left_ = std::make_shared<ModelSpace>(left);
    s.right_ = std::make_shared<ModelSpace>(right);
    if (s.product_depth() > 4) {
        throw std::invalid_argument("product: nesting depth limited to 4");
    }
    if (s.dim_ > 8) {
        throw std::invalid_argument("product: total dimension limited to 8");
    }
    return s;
}

ModelSpace ModelSpace::cone(const ModelSpace& link) {
    const bool circle_link = link.kind() == Kind::Circle && link.radius() <= 1.0;
    const bool unit_sphere_link =
        link.kind() == Kind::Sphere && std::abs(link.radius() - 1.0) < 1e-15;
    if (!circle_link && !unit_sphere_link) {
        throw std::invalid_argument(
            "cone: link must be circle(r) with r <= 1 or sphere(n,1)");
    }
    ModelSpace s;
    s.kind_ = Kind::Cone;
    s.dim_ = link.dim() + 1;
    s.left_ = std::make_shared<ModelSpace>(link);
    return s;
}

ModelSpace ModelSpace::rescaled(const ModelSpace& base, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("rescaled: factors must be positive");
    }
    ModelSpace s;
    s.kind_ = Kind::Rescaled;
    s.dim_ = base.dim();
    s.scale_a_ = a;
    s.scale_b_ = b;
    s.left_ = std::make_shared<ModelSpace>(base);
    return s;
}

bool ModelSpace::compact() const {
    switch (kind_) {
        case Kind::Circle:
        case Kind::Sphere:
            return true;
        case Kind::Euclidean:
        case Kind::HalfSpace:
        case Kind::Cone:
            return false;
        case Kind::Product:
            return left().compact() && right().compact();
        case Kind::Rescaled:
            return left().compact();
    }
    return false;
}

int ModelSpace::coord_count() const {
    switch (kind_) {
        case Kind::Circle: return 1;
        case Kind::Sphere: return dim_ + 1;
        case Kind::Euclidean:
        case Kind::HalfSpace: return dim_;
        case Kind::Product: return left().coord_count() + right().coord_count();
        case Kind::Cone: return 1 + left().coord_count();
        case Kind::Rescaled: return left().coord_count();
    }
    return 0;
}

int ModelSpace::product_depth() const {
    switch (kind_) {
        case Kind::Product:
            return 1 + std::max(left().product_depth(), right().product_depth());
        case Kind::Cone:
        case Kind::Rescaled:
            return left().product_depth();
        default:
            return 0;
    }
}

double ModelSpace::volume() const {
    switch (kind_) {
        case Kind::Circle:
            return 2.0 * kPi * radius_;
        case Kind::Sphere:
            return std::pow(radius_, dim_) * 2.0 *
                   std::pow(kPi, (dim_ + 1) / 2.0) / std::tgamma((dim_ + 1) / 2.0);
        case Kind::Product:
            return left().volume() * right().volume();
        case Kind::Rescaled:
            return scale_b_ * left().volume();
        default:
            throw std::invalid_argument("volume: space is not compact: " + str());
    }
}

double ModelSpace::distance(const Point& x, const Point& y) const {
    if (static_cast<int>(x.coords.size()) != coord_count() ||
        static_cast<int>(y.coords.size()) != coord_count()) {
        throw std::invalid_argument("distance: point has wrong coordinate count for " +
                                    str());
    }
    switch (kind_) {
        case Kind::Circle:
            return radius_ * angle_diff(x.coords[0], y.coords[0]);
        case Kind::Sphere: {
            double dot = 0.0;
            for (int i = 0; i <= dim_; ++i) dot += x.coords[i] * y.coords[i];
            const double c = std::clamp(dot / (radius_ * radius_), -1.0, 1.0);
            return radius_ * std::acos(c);
        }
        case Kind::Euclidean:
        case Kind::HalfSpace: {
            double s = 0.0;
            for (int i = 0; i < dim_; ++i) {
                const double d = x.coords[i] - y.coords[i];
                s += d * d;
            }
            return std::sqrt(s);
        }
        case Kind::Product: {
            const int nl = left().coord_count();
            Point xl{std::vector<double>(x.coords.begin(), x.coords.begin() + nl)};
            Point yl{std::vector<double>(y.coords.begin(), y.coords.begin() + nl)};
            Point xr{std::vector<double>(x.coords.begin() + nl, x.coords.end())};
            Point yr{std::vector<double>(y.coords.begin() + nl, y.coords.end())};
            return std::hypot(left().distance(xl, yl), right().distance(xr, yr));
        }
        case Kind::Cone: {
            const double r1 = x.coords[0];
            const double r2 = y.coords[0];
            if (r1 < 0.0 || r2 < 0.0) {
                throw std::invalid_argument("cone distance: radial coordinate < 0");
            }
            Point xl{std::vector<double>(x.coords.begin() + 1, x.coords.end())};
            Point yl{std::vector<double>(y.coords.begin() + 1, y.coords.end())};
            const double ang = std::min(left().distance(xl, yl), kPi);
            const double d2 = r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * std::cos(ang);
            return std::sqrt(std::max(d2, 0.0));
        }
        case Kind::Rescaled:
            return scale_a_ * left().distance(x, y);
    }
    return 0.0;
}

std::vector<SpectralLevel> ModelSpace::levels_below(double mu_cap) const {
    std::vector<SpectralLevel> out;
    switch (kind_) {
        case Kind::Circle: {
            for (int j = 0; j * j / (radius_ * radius_) <= mu_cap; ++j) {
                out.push_back({j * j / (radius_ * radius_), j == 0 ? 1 : 2, j});
            }
            return out;
        }
        case Kind::Sphere: {
            const double k2 = radius_ * radius_;
            for (int l = 0; l * (l + dim_ - 1.0) / k2 <= mu_cap; ++l) {
                out.push_back({l * (l + dim_ - 1.0) / k2, sphere_mult(dim_, l), l});
            }
            return out;
        }
        case Kind::Product: {
            const auto ls = left().levels_below(mu_cap);
            const auto rs = right().levels_below(mu_cap);
            std::vector<SpectralLevel> raw;
            for (const auto& a : ls) {
                for (const auto& b : rs) {
                    const double mu = a.mu + b.mu;
                    if (mu <= mu_cap * (1.0 + kMergeRelTol)) {
                        raw.push_back({mu, a.mult * b.mult, 0});
                    }
                }
            }
            return merge_levels(std::move(raw));
        }
        case Kind::Rescaled: {
            out = left().levels_below(mu_cap * scale_a_ * scale_a_);
            for (auto& lv : out) lv.mu /= scale_a_ * scale_a_;
            return out;
        }
        default:
            throw std::invalid_argument("spectrum: space is not compact: " + str());
    }
}

std::vector<SpectralLevel> ModelSpace::spectrum(int max_level) const {
    if (max_level < 0) throw std::invalid_argument("spectrum: max_level must be >= 0");
    switch (kind_) {
        case Kind::Circle: {
            std::vector<SpectralLevel> out;
            for (int j = 0; j <= max_level; ++j) {
                out.push_back({j * j / (radius_ * radius_), j == 0 ? 1 : 2, j});
            }
            return out;
        }
        case Kind::Sphere: {
            std::vector<SpectralLevel> out;
            const double k2 = radius_ * radius_;
            for (int l = 0; l <= max_level; ++l) {
                out.push_back({l * (l + dim_ - 1.0) / k2, sphere_mult(dim_, l), l});
            }
            return out;
        }
        case Kind::Rescaled: {
            auto out = left().spectrum(max_level);
            for (auto& lv : out) lv.mu /= scale_a_ * scale_a_;
            return out;
        }
        case Kind::Product: {
            double cap = 1.0;
            // Scale-aware starting cap: first nonzero eigenvalue of a factor.
            for (const auto& lv : left().levels_below(1e6)) {
                if (lv.mu > 0.0) { cap = lv.mu * (max_level + 1.0); break; }
            }
            for (int iter = 0; iter < 60; ++iter) {
                auto merged = levels_below(cap);
                if (static_cast<int>(merged.size()) > max_level) {
                    merged.resize(max_level + 1);
                    return merged;
                }
                cap *= 2.0;
            }
            throw std::runtime_error("spectrum: failed to enumerate product levels");
        }
        default:
            throw std::invalid_argument("spectrum: space is not compact: " + str());
    }
}

double ModelSpace::eigenspace_sum_at_distance(int level, double dist) const {
    if (level < 0) throw std::invalid_argument("eigenspace_sum: level must be >= 0");
    switch (kind_) {
        case Kind::Circle: {
            if (level == 0) return 1.0 / (2.0 * kPi * radius_);
            return std::cos(level * dist / radius_) / (kPi * radius_);
        }
        case Kind::Sphere: {
            const double lam = (dim_ - 1) / 2.0;
            const double c = std::cos(dist / radius_);
            const double num = specfun::gegenbauer(level, lam, c);
            const double den = specfun::gegenbauer(level, lam, 1.0);
            const double m = static_cast<double>(sphere_mult(dim_, level));
            return m / volume() * num / den;
        }
        default:
            throw std::invalid_argument(
                "eigenspace_sum: addition theorem applies to circle/sphere only");
    }
}

double ModelSpace::eigenspace_sum(int level, const Point& x, const Point& y) const {
    return eigenspace_sum_at_distance(level, distance(x, y));
}

std::string ModelSpace::str() const {
    switch (kind_) {
        case Kind::Circle:
            return "circle(" + fmt_double(radius_) + ")";
        case Kind::Sphere:
            return "sphere(" + std::to_string(dim_) + "," + fmt_double(radius_) + ")";
        case Kind::Euclidean:
            return "euclidean(" + std::to_string(dim_) + ")";
        case Kind::HalfSpace:
            return "halfspace(" + std::to_string(dim_) + ")";
        case Kind::Product:
            return "product(" + left().str() + "," + right().str() + ")";
        case Kind::Cone:
            return "cone(" + left().str() + ")";
        case Kind::Rescaled:
            return "rescaled(" + left().str() + "," + fmt_double(scale_a_) + "," +
                   fmt_double(scale_b_) + ")";
    }
    return "";
}

namespace {

struct Parser {
    const std::string& text;
    std::size_t pos = 0;

    explicit Parser(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw std::invalid_argument("parse error at position " + std::to_string(pos) +
                                    ": " + msg + " in '" + text + "'");
    }

    void expect(char c) {
        skip_ws();
        if (pos >= text.size() || text[pos] != c) fail(std::string("expected '") + c + "'");
        ++pos;
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
        if (start == pos) fail("expected identifier");
        return text.substr(start, pos - start);
    }

    double number() {
        skip_ws();
        double v = 0.0;
        auto res = std::from_chars(text.data() + pos, text.data() + text.size(), v);
        if (res.ec != std::errc()) fail("expected number");
        pos = res.ptr - text.data();
        return v;
    }

    ModelSpace space() {
        const std::string name = ident();
        expect('(');
        ModelSpace result = ModelSpace::circle(1.0);
        if (name == "circle") {
            result = ModelSpace::circle(number());
        } else if (name == "sphere") {
            const int n = static_cast<int>(number());
            expect(',');
            result = ModelSpace::sphere(n, number());
        } else if (name == "euclidean") {
            result = ModelSpace::euclidean(static_cast<int>(number()));
        } else if (name == "halfspace") {
            result = ModelSpace::half_space(static_cast<int>(number()));
        } else if (name == "product") {
            ModelSpace l = space();
            expect(',');
            ModelSpace r = space();
            result = ModelSpace::product(l, r);
        } else if (name == "cone") {
            result = ModelSpace::cone(space());
        } else if (name == "rescaled") {
            ModelSpace base = space();
            expect(',');
            const double a = number();
            expect(',');
            const double b = number();
            result = ModelSpace::rescaled(base, a, b);
        } else {
            fail("unknown space kind '" + name + "'");
        }
        expect(')');
        return result;
    }
};

}  // namespace

ModelSpace ModelSpace::parse(const std::string& text) {
    Parser p(text);
    ModelSpace s = p.space();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing characters");
    return s;
}

}  // namespace heatlab
