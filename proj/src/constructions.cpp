#include "heatlab/constructions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "heatlab/quadrature.hpp"

namespace heatlab::constructions {

namespace {

constexpr double kPi = std::numbers::pi;

double heat_1d(double u, double t) {
    return std::pow(4.0 * kPi * t, -0.5) * std::exp(-u * u / (4.0 * t));
}

double heat_1d_deriv(double u, double t) {
    return -u / (2.0 * t) * heat_1d(u, t);
}

// Composite Gauss-Legendre over [a,b] in panels of width <= w.
double composite(const std::function<double(double)>& f, double a, double b, double w,
                 int nodes) {
    double sum = 0.0;
    double lo = a;
    while (lo < b) {
        const double hi = std::min(lo + w, b);
        sum += quadrature::integrate(f, lo, hi, nodes);
        lo = hi;
    }
    return sum;
}

}  // namespace

double flat_constant(int n) {
    if (n < 1) throw std::domain_error("flat_constant: n must be >= 1");
    return 0.25 * std::pow(8.0 * kPi, -n / 2.0);
}

double flat_constant_by_quadrature(int n) {
    if (n < 1 || n > 6) {
        throw std::domain_error("flat_constant_by_quadrature: supported for 1 <= n <= 6");
    }
    const double t = 1.0;
    const double span = 15.0 * std::sqrt(2.0 * t);
    const double deriv_sq = quadrature::integrate(
        [&](double u) { const double d = heat_1d_deriv(u, t); return d * d; }, -span,
        span, 200);
    const double plain_sq = quadrature::integrate(
        [&](double u) { const double g = heat_1d(u, t); return g * g; }, -span, span,
        200);
    // The n-dimensional integral factorizes into one derivative direction
    // and n-1 plain directions.
    return std::pow(t, (n + 2.0) / 2.0) * deriv_sq * std::pow(plain_sq, n - 1);
}

HalfSpaceSample halfspace_gt_normal(int n, double x_n, double t) {
    if (!(x_n > 0.0) || !(t > 0.0)) {
        throw std::domain_error("halfspace_gt_normal: require x_n > 0 and t > 0");
    }
    const double e = std::exp(-x_n * x_n / (2.0 * t));
    const double profile = 1.0 - e + (x_n * x_n / t) * e;
    HalfSpaceSample sample;
    sample.n = n;
    sample.x_n = x_n;
    sample.t = t;
    sample.value = flat_constant(n) * std::pow(t, -(n + 2.0) / 2.0) * profile;
    return sample;
}

double halfspace_gt_normal_by_quadrature(int n, double x_n, double t) {
    if (!(x_n > 0.0) || !(t > 0.0)) {
        throw std::domain_error("halfspace quadrature: require x_n > 0 and t > 0");
    }
    const double span = std::sqrt(t);
    const double upper = x_n + 15.0 * span;
    const double normal_part = composite(
        [&](double y) {
            const double d = heat_1d_deriv(x_n - y, t) + heat_1d_deriv(x_n + y, t);
            return d * d;
        },
        0.0, upper, span, 40);
    const double plain_sq = quadrature::integrate(
        [&](double u) { const double g = heat_1d(u, t); return g * g; },
        -15.0 * span, 15.0 * span, 200);
    return normal_part * std::pow(plain_sq, n - 1);
}

}  // namespace heatlab::constructions
