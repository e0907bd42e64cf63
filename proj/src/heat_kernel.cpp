#include "heatlab/heat_kernel.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>

#include "heatlab/specfun.hpp"

namespace heatlab {

namespace {

constexpr double kPi = std::numbers::pi;

double gaussian_kernel(int n, double dist, double t) {
    return std::pow(4.0 * kPi * t, -n / 2.0) * std::exp(-dist * dist / (4.0 * t));
}

Point slice(const Point& p, int from, int to) {
    return Point{std::vector<double>(p.coords.begin() + from, p.coords.begin() + to)};
}

// Weighted sums over the exact level structure of a circle or sphere.
// Each case supplies the term and an envelope whose successive ratios are
// nonincreasing for l >= 1, so a geometric bound certifies the tail.
enum class Weight { Trace, Energy, Kernel };

struct LevelTerms {
    const ModelSpace& space;  // Circle or Sphere
    double t;
    Weight weight;
    double dist;  // Kernel only

    double mu(std::int64_t l) const {
        if (space.kind() == Kind::Circle) {
            return static_cast<double>(l) * l / (space.radius() * space.radius());
        }
        return l * (l + space.dim() - 1.0) / (space.radius() * space.radius());
    }
    double mult(std::int64_t l) const {
        if (space.kind() == Kind::Circle) return l == 0 ? 1.0 : 2.0;
        // Recover multiplicity through the exact spectrum helper.
        return static_cast<double>(space.spectrum(static_cast<int>(l))[l].mult);
    }
    double envelope(std::int64_t l, double m) const {
        switch (weight) {
            case Weight::Trace: return m * std::exp(-mu(l) * t);
            case Weight::Energy: return m * mu(l) * std::exp(-2.0 * mu(l) * t);
            case Weight::Kernel:
                return m / space.volume() * std::exp(-mu(l) * t);
        }
        return 0.0;
    }
    double term(std::int64_t l, double m) const {
        if (weight == Weight::Kernel) {
            return std::exp(-mu(l) * t) *
                   space.eigenspace_sum_at_distance(static_cast<int>(l), dist);
        }
        return envelope(l, m);
    }
};

KernelValue level_series(const ModelSpace& space, double t, double tol, Weight weight,
                         double dist) {
    LevelTerms lt{space, t, weight, dist};
    const std::int64_t budget = max_levels();

    // Multiplicities incrementally (avoids re-deriving spectra per level).
    auto mult_at = [&](std::int64_t l) -> double {
        if (space.kind() == Kind::Circle) return l == 0 ? 1.0 : 2.0;
        const int n = space.dim();
        auto binom_d = [](double a, int b) {
            double r = 1.0;
            for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
            return r;
        };
        if (l == 0) return 1.0;
        return binom_d(static_cast<double>(l + n), n) -
               binom_d(static_cast<double>(l + n - 2), n);
    };

    double sum = 0.0;
    TruncationCertificate cert{0, std::numeric_limits<double>::infinity(), tol};
    for (std::int64_t l = 0; l <= budget; ++l) {
        const double m = mult_at(l);
        sum += lt.term(l, m);
        cert.terms_used = l + 1;
        if (l < 1) continue;  // envelope ratios monotone from l >= 1 on
        const double m1 = mult_at(l + 1);
        const double m2 = mult_at(l + 2);
        const double b1 = lt.envelope(l + 1, m1);
        const double b2 = lt.envelope(l + 2, m2);
        const double q = b1 > 0.0 ? b2 / b1 : 0.0;
        if (q < 1.0) {
            const double tail = b1 > 0.0 ? b1 / (1.0 - q) : 0.0;
            cert.tail_bound = tail;
            if (tail <= tol) {
                return KernelValue{sum, cert};
            }
        }
    }
    throw BudgetError("level series: budget of " + std::to_string(budget) +
                          " levels exhausted before tolerance " + std::to_string(tol),
                      cert);
}

KernelValue evaluate_cone(const ModelSpace& space, const Point& x, const Point& y,
                          double t, double tol) {
    const ModelSpace& link = space.left();
    const int big_n = space.dim();
    const double alpha = (2.0 - big_n) / 2.0;
    const double vol_link = link.volume();
    const double r1 = x.coords[0];
    const double r2 = y.coords[0];
    if (r1 < 0.0 || r2 < 0.0) {
        throw std::invalid_argument("cone evaluate: radial coordinate must be >= 0");
    }
    const double prefactor =
        (1.0 / (2.0 * t)) * std::exp(-(r1 * r1 + r2 * r2) / (4.0 * t));
    if (r1 * r2 == 0.0) {
        // Only the constant link level has a nonvanishing limit at the vertex.
        const double value = prefactor * std::pow(4.0 * t, alpha) /
                             std::tgamma(1.0 - alpha) / vol_link;
        return KernelValue{value, {1, 0.0, tol}};
    }
    const double z = r1 * r2 / (2.0 * t);
    if (z > 50.0) {
        throw std::domain_error(
            "cone evaluate: r1*r2/(2t) exceeds the supported Bessel domain [0,50]");
    }
    const double link_dist =
        link.distance(slice(x, 1, static_cast<int>(x.coords.size())),
                      slice(y, 1, static_cast<int>(y.coords.size())));
    const double weight = std::pow(r1 * r2, alpha);
    const double log_zh = std::log(z / 2.0);
    const std::int64_t budget = max_levels();

    // Envelope for the l-th term: W * P * (m_l/vol) * (z/2)^nu_l e^{z^2/4}/Gamma(nu_l+1).
    auto envelope = [&](const SpectralLevel& lv) {
        const double nu = std::sqrt(alpha * alpha + lv.mu);
        return weight * prefactor * lv.mult / vol_link *
               std::exp(nu * log_zh + z * z / 4.0 - std::lgamma(nu + 1.0));
    };

    double sum = 0.0;
    double bessel_err = 0.0;
    std::int64_t terms = 0;
    TruncationCertificate cert{0, std::numeric_limits<double>::infinity(), tol};
    int lcount = 64;
    std::vector<SpectralLevel> levels = link.spectrum(lcount + 2);
    for (std::int64_t j = 0; j <= budget; ++j) {
        if (j + 2 >= static_cast<std::int64_t>(levels.size())) {
            lcount *= 2;
            levels = link.spectrum(lcount + 2);
        }
        const SpectralLevel& lv = levels[j];
        const double nu = std::sqrt(alpha * alpha + lv.mu);
        const double scale = weight * prefactor * lv.mult / vol_link;
        if (scale > 0.0) {
            const double bessel_tol =
                tol / (2.0 * scale * (j + 1.0) * (j + 2.0));
            const auto ib = specfun::bessel_i(nu, z, bessel_tol);
            const double kern =
                link.eigenspace_sum_at_distance(static_cast<int>(j), link_dist);
            sum += weight * prefactor * ib.value * kern;
            bessel_err += scale * ib.tail_bound;
            terms += ib.terms_used;
        }
        cert.terms_used = terms;
        // Geometric tail once the envelope ratio has dropped below 1/2.
        const double b1 = envelope(levels[j + 1]);
        const double b2 = envelope(levels[j + 2]);
        const double q = b1 > 0.0 ? b2 / b1 : 0.0;
        if (q < 0.5) {
            const double tail = b1 / (1.0 - q) + bessel_err;
            cert.tail_bound = tail;
            if (tail <= tol) {
                return KernelValue{sum, cert};
            }
        }
    }
    throw BudgetError("cone series: level budget exhausted", cert);
}

KernelValue evaluate_product(const ModelSpace& space, const Point& x, const Point& y,
                             double t, double tol) {
    const int nl = space.left().coord_count();
    const int total = space.coord_count();
    const Point xl = slice(x, 0, nl), yl = slice(y, 0, nl);
    const Point xr = slice(x, nl, total), yr = slice(y, nl, total);
    double tol_l = tol / 2.0, tol_r = tol / 2.0;
    for (int pass = 0; pass < 4; ++pass) {
        const KernelValue a = evaluate(space.left(), xl, yl, t, tol_l);
        const KernelValue b = evaluate(space.right(), xr, yr, t, tol_r);
        const double ea = a.cert.tail_bound, eb = b.cert.tail_bound;
        const double tail = ea * std::abs(b.value) + eb * std::abs(a.value) + ea * eb;
        if (tail <= tol) {
            return KernelValue{a.value * b.value,
                               {a.cert.terms_used + b.cert.terms_used, tail, tol}};
        }
        tol_l = tol / (2.0 * (std::abs(b.value) + 1.0));
        tol_r = tol / (2.0 * (std::abs(a.value) + 1.0));
    }
    throw std::runtime_error("product evaluate: failed to balance factor tolerances");
}

}  // namespace

std::int64_t max_levels() {
    if (const char* env = std::getenv("HEATLAB_MAX_LEVELS")) {
        const long long v = std::atoll(env);
        if (v > 0) return v;
    }
    return 100000;
}

KernelValue evaluate(const ModelSpace& space, const Point& x, const Point& y,
                     double t, double tol) {
    if (!(t > 0.0)) throw std::invalid_argument("evaluate: t must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("evaluate: tol must be positive");
    switch (space.kind()) {
        case Kind::Circle:
        case Kind::Sphere:
            return level_series(space, t, tol, Weight::Kernel, space.distance(x, y));
        case Kind::Euclidean:
            return KernelValue{gaussian_kernel(space.dim(), space.distance(x, y), t),
                               {1, 0.0, tol}};
        case Kind::HalfSpace: {
            const int n = space.dim();
            if (!(x.coords[n - 1] > 0.0) || !(y.coords[n - 1] > 0.0)) {
                throw std::invalid_argument(
                    "halfspace evaluate: last coordinate must be positive");
            }
            Point y_reflected = y;
            y_reflected.coords[n - 1] = -y_reflected.coords[n - 1];
            const double direct = gaussian_kernel(n, space.distance(x, y), t);
            double s = 0.0;
            for (int i = 0; i < n; ++i) {
                const double d = x.coords[i] - y_reflected.coords[i];
                s += d * d;
            }
            const double mirrored = gaussian_kernel(n, std::sqrt(s), t);
            return KernelValue{direct + mirrored, {2, 0.0, tol}};
        }
        case Kind::Product:
            return evaluate_product(space, x, y, t, tol);
        case Kind::Cone:
            return evaluate_cone(space, x, y, t, tol);
        case Kind::Rescaled: {
            const double a = space.scale_a(), b = space.scale_b();
            KernelValue base =
                evaluate(space.left(), x, y, t / (a * a), tol * b);
            base.value /= b;
            base.cert.tail_bound /= b;
            base.cert.target_tol = tol;
            return base;
        }
    }
    throw std::logic_error("evaluate: unhandled space kind");
}

KernelValue heat_trace(const ModelSpace& space, double t, double tol) {
    if (!(t > 0.0)) throw std::invalid_argument("heat_trace: t must be positive");
    switch (space.kind()) {
        case Kind::Circle:
        case Kind::Sphere:
            return level_series(space, t, tol, Weight::Trace, 0.0);
        case Kind::Product: {
            // Z factorizes; balance factor tolerances like the kernel product.
            double tol_l = tol / 2.0, tol_r = tol / 2.0;
            for (int pass = 0; pass < 4; ++pass) {
                const KernelValue a = heat_trace(space.left(), t, tol_l);
                const KernelValue b = heat_trace(space.right(), t, tol_r);
                const double tail = a.cert.tail_bound * b.value +
                                    b.cert.tail_bound * a.value +
                                    a.cert.tail_bound * b.cert.tail_bound;
                if (tail <= tol) {
                    return KernelValue{a.value * b.value,
                                       {a.cert.terms_used + b.cert.terms_used, tail, tol}};
                }
                tol_l = tol / (2.0 * (b.value + 1.0));
                tol_r = tol / (2.0 * (a.value + 1.0));
            }
            throw std::runtime_error("heat_trace: failed to balance tolerances");
        }
        case Kind::Rescaled: {
            KernelValue base = heat_trace(space.left(), t / (space.scale_a() * space.scale_a()), tol);
            base.cert.target_tol = tol;
            return base;
        }
        default:
            throw std::invalid_argument("heat_trace: space is not compact: " + space.str());
    }
}

KernelValue energy_trace(const ModelSpace& space, double t, double tol) {
    if (!(t > 0.0)) throw std::invalid_argument("energy_trace: t must be positive");
    switch (space.kind()) {
        case Kind::Circle:
        case Kind::Sphere:
            return level_series(space, t, tol, Weight::Energy, 0.0);
        case Kind::Product: {
            // sum m1 m2 (mu1+mu2) e^{-2(mu1+mu2)t} = E_L Z_R(2t) + Z_L(2t) E_R.
            const KernelValue el = energy_trace(space.left(), t, tol / 8.0);
            const KernelValue er = energy_trace(space.right(), t, tol / 8.0);
            const KernelValue zl = heat_trace(space.left(), 2.0 * t, tol / 8.0);
            const KernelValue zr = heat_trace(space.right(), 2.0 * t, tol / 8.0);
            const double value = el.value * zr.value + zl.value * er.value;
            const double tail =
                el.cert.tail_bound * zr.value + zr.cert.tail_bound * el.value +
                er.cert.tail_bound * zl.value + zl.cert.tail_bound * er.value +
                2.0 * tol * tol / 64.0;
            return KernelValue{
                value,
                {el.cert.terms_used + er.cert.terms_used + zl.cert.terms_used +
                     zr.cert.terms_used,
                 tail, tol}};
        }
        case Kind::Rescaled: {
            const double a2 = space.scale_a() * space.scale_a();
            KernelValue base = energy_trace(space.left(), t / a2, tol * a2);
            base.value /= a2;
            base.cert.tail_bound /= a2;
            base.cert.target_tol = tol;
            return base;
        }
        default:
            throw std::invalid_argument("energy_trace: space is not compact: " +
                                        space.str());
    }
}

double cone_diagonal_constant(const ModelSpace& cone_space, double t) {
    if (cone_space.kind() != Kind::Cone) {
        throw std::invalid_argument("cone_diagonal_constant: expected a cone");
    }
    const int n = cone_space.dim();
    const double omega_n = std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
    const double link_measure = cone_space.left().volume();
    return n * omega_n / link_measure * std::pow(4.0 * kPi * t, -n / 2.0);
}

KernelValue diagonal(const ModelSpace& space, const Point& p, double t, double tol) {
    switch (space.kind()) {
        case Kind::Circle:
        case Kind::Sphere:
        case Kind::Product: {
            if (!space.compact()) break;
            KernelValue z = heat_trace(space, t, tol * space.volume());
            z.value /= space.volume();
            z.cert.tail_bound /= space.volume();
            z.cert.target_tol = tol;
            return z;
        }
        case Kind::Cone:
            return KernelValue{cone_diagonal_constant(space, t), {1, 0.0, tol}};
        case Kind::Euclidean:
            return KernelValue{std::pow(4.0 * kPi * t, -space.dim() / 2.0),
                               {1, 0.0, tol}};
        case Kind::HalfSpace:
            return evaluate(space, p, p, t, tol);
        case Kind::Rescaled: {
            const double a = space.scale_a(), b = space.scale_b();
            KernelValue base = diagonal(space.left(), p, t / (a * a), tol * b);
            base.value /= b;
            base.cert.tail_bound /= b;
            base.cert.target_tol = tol;
            return base;
        }
    }
    throw std::invalid_argument("diagonal: unsupported space: " + space.str());
}

}  // namespace heatlab
