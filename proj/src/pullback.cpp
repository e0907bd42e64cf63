#include "heatlab/pullback.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace heatlab {

namespace {

constexpr double kPi = std::numbers::pi;

bool has_constant_diagonal(const ModelSpace& space) {
    if (space.kind() == Kind::Euclidean) return true;
    if (space.kind() == Kind::Product) {
        return has_constant_diagonal(space.left()) && has_constant_diagonal(space.right());
    }
    if (space.kind() == Kind::Rescaled) return has_constant_diagonal(space.left());
    return space.kind() == Kind::Circle || space.kind() == Kind::Sphere;
}

// rho_{2t} on a space with constant diagonal.
double constant_diagonal(const ModelSpace& space, double two_t, double tol) {
    if (space.kind() == Kind::Euclidean) {
        return std::pow(4.0 * kPi * two_t, -space.dim() / 2.0);
    }
    return diagonal(space, Point{}, two_t, tol).value;
}

// g_t block scalar of one factor relative to its own metric.
double factor_scalar(const ModelSpace& space, double t, double tol) {
    if (space.kind() == Kind::Euclidean) {
        return flat_pullback_scalar(space.dim(), t);
    }
    return energy_trace(space, t, tol).value / (space.dim() * space.volume());
}

}  // namespace

bool is_homogeneous(const ModelSpace& space) {
    switch (space.kind()) {
        case Kind::Circle:
        case Kind::Sphere:
            return true;
        case Kind::Rescaled:
            return is_homogeneous(space.left());
        case Kind::Product:
            return is_homogeneous(space.left()) && is_homogeneous(space.right()) &&
                   space.left() == space.right();
        default:
            return false;
    }
}

double flat_pullback_scalar(int n, double t) {
    const double c1 = 0.25 * std::pow(8.0 * kPi, -n / 2.0);
    return c1 * std::pow(t, -(n + 2.0) / 2.0);
}

double pullback_scalar(const ModelSpace& space, double t, double tol) {
    if (!space.compact() || !is_homogeneous(space)) {
        throw std::invalid_argument("pullback_scalar: space is not homogeneous compact: " +
                                    space.str());
    }
    return energy_trace(space, t, tol).value / (space.dim() * space.volume());
}

double c_of_t(const ModelSpace& space, double t, double tol) {
    if (!space.compact()) {
        throw std::invalid_argument("c_of_t: space is not compact: " + space.str());
    }
    return space.dim() * space.volume() / energy_trace(space, t, tol).value;
}

PullbackSample pullback_matrix(const ModelSpace& space, double t, const Point& p,
                               double tol) {
    if (space.kind() != Kind::Product) {
        throw std::invalid_argument("pullback_matrix: expected a product space");
    }
    const ModelSpace& a = space.left();
    const ModelSpace& b = space.right();
    if (!has_constant_diagonal(a) || !has_constant_diagonal(b)) {
        throw std::invalid_argument(
            "pullback_matrix: a factor has non-constant diagonal, hypothesis violated");
    }
    (void)p;  // block values are point-independent for these factors
    PullbackSample sample;
    sample.t = t;
    sample.scalar_form = false;
    sample.block_dims = {a.dim(), b.dim()};
    sample.block_values = {
        constant_diagonal(b, 2.0 * t, tol) * factor_scalar(a, t, tol),
        constant_diagonal(a, 2.0 * t, tol) * factor_scalar(b, t, tol)};
    return sample;
}

ImmersionReport ihki_check(const ModelSpace& space, const std::vector<double>& t_grid,
                           double threshold, double tol) {
    if (!space.compact()) {
        throw std::invalid_argument("ihki_check: space is not compact: " + space.str());
    }
    if (t_grid.empty()) throw std::invalid_argument("ihki_check: empty t grid");
    ImmersionReport report;
    report.t_grid = t_grid;
    const int n = space.dim();
    int passes = 0;
    for (double t : t_grid) {
        const double c = c_of_t(space, t, tol);
        double dev = 0.0;
        if (space.kind() == Kind::Product) {
            const PullbackSample s = pullback_matrix(space, t, Point{}, tol);
            double acc = 0.0;
            for (std::size_t i = 0; i < s.block_values.size(); ++i) {
                const double d = c * s.block_values[i] - 1.0;
                acc += s.block_dims[i] * d * d;
            }
            dev = std::sqrt(acc / n);
        } else {
            dev = std::abs(c * pullback_scalar(space, t, tol) - 1.0);
        }
        report.c_values.push_back(c);
        report.deviations.push_back(dev);
        if (dev <= threshold) {
            ++passes;
        } else if (!report.witness || dev > report.witness->deviation) {
            report.witness = ImmersionWitness{t, dev};
        }
        report.sup_deviation = std::max(report.sup_deviation, dev);
    }
    if (passes == static_cast<int>(t_grid.size())) {
        report.verdict = ImmersionVerdict::IhkiConsistent;
    } else if (passes > 0) {
        report.verdict = ImmersionVerdict::SingleTimeOnly;
    } else {
        report.verdict = ImmersionVerdict::Fails;
    }
    return report;
}

EigenmapReport eigenspace_immersion(const ModelSpace& space, int level) {
    if (space.kind() != Kind::Circle && space.kind() != Kind::Sphere) {
        throw std::invalid_argument(
            "eigenspace_immersion: addition theorem requires circle or sphere");
    }
    if (level < 1) throw std::invalid_argument("eigenspace_immersion: level must be >= 1");
    const auto levels = space.spectrum(level);
    const double mu = levels[level].mu;
    const double m = static_cast<double>(levels[level].mult);
    const double vol = space.volume();
    const int n = space.dim();

    auto f = [&](double d) { return space.eigenspace_sum_at_distance(level, d); };
    EigenmapReport report;
    report.lambda = mu;
    report.mult = levels[level].mult;
    report.on_sphere_deviation = std::abs(vol / m * f(0.0) - 1.0);

    // Second derivative of the distance profile at coincidence, Richardson
    // extrapolated to kill the h^2 term of the central difference.
    const double h = 1e-2 * space.radius();
    auto second = [&](double step) { return 2.0 * (f(step) - f(0.0)) / (step * step); };
    const double d2 = (4.0 * second(h / 2.0) - second(h)) / 3.0;
    const double metric_scalar = -n * vol / m * d2;  // n Phi* g relative to g
    report.metric_deviation = std::abs(metric_scalar - mu);
    return report;
}

AsymptoticFit small_t_asymptotics(const ModelSpace& sphere, double t_lo, double t_hi,
                                  int fit_points) {
    if (sphere.kind() != Kind::Sphere && sphere.kind() != Kind::Circle) {
        throw std::invalid_argument("small_t_asymptotics: expected a round sphere");
    }
    const double k2 = sphere.radius() * sphere.radius();
    if (!(t_lo >= 1e-3 * k2) || !(t_hi <= 1e-1 * k2) || !(t_lo < t_hi)) {
        throw std::invalid_argument(
            "small_t_asymptotics: window must lie in [1e-3, 1e-1] * k^2");
    }
    if (fit_points < 4) {
        throw std::invalid_argument("small_t_asymptotics: need at least 4 fit points");
    }
    const int n = sphere.dim();
    const double prefactor = 4.0 * std::pow(8.0 * kPi, n / 2.0);

    double s1 = 0.0, st = 0.0, stt = 0.0, sf = 0.0, stf = 0.0;
    for (int i = 0; i < fit_points; ++i) {
        const double t =
            t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (fit_points - 1));
        const double f =
            prefactor * std::pow(t, (n + 2.0) / 2.0) * pullback_scalar(sphere, t, 1e-13);
        s1 += 1.0;
        st += t;
        stt += t * t;
        sf += f;
        stf += t * f;
    }
    const double det = s1 * stt - st * st;
    AsymptoticFit fit;
    fit.constant = (stt * sf - st * stf) / det;
    fit.slope = (s1 * stf - st * sf) / det;
    return fit;
}

double trace_derivative_check(const ModelSpace& space, double t, double h) {
    if (!(t > h) || !(h > 0.0)) {
        throw std::invalid_argument("trace_derivative_check: require t > h > 0");
    }
    const double vol = space.volume();
    const double rho_plus = heat_trace(space, 2.0 * (t + h), 1e-13).value / vol;
    const double rho_minus = heat_trace(space, 2.0 * (t - h), 1e-13).value / vol;
    const double fd = (rho_plus - rho_minus) / (2.0 * h);
    const double rhs = 2.0 * energy_trace(space, t, 1e-13).value / vol;
    return std::abs(fd + rhs);
}

double product_diagonal_defect(const ModelSpace& a, const ModelSpace& b, double t,
                               double tol) {
    const double da = diagonal(a, Point{}, t, tol).value;
    const double db = diagonal(b, Point{}, t, tol).value;
    const double lhs = std::pow(da, b.dim());
    const double rhs = std::pow(db, a.dim());
    return std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
}

}  // namespace heatlab
