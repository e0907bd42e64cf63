#include "heatlab/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace heatlab::specfun {

namespace {
constexpr double kBesselZMax = 50.0;
constexpr double kBesselNuMax = 200.0;
}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("log_gamma: argument must be positive, got " +
                                std::to_string(x));
    }
    return std::lgamma(x);
}

SeriesEval bessel_i(double nu, double z, double tol) {
    if (!(nu >= 0.0) || !std::isfinite(nu) || !(z >= 0.0) || !std::isfinite(z)) {
        throw std::domain_error("bessel_i: require finite nu >= 0, z >= 0");
    }
    if (!(tol > 0.0)) {
        throw std::domain_error("bessel_i: tol must be positive");
    }
    if (z > kBesselZMax || nu > kBesselNuMax) {
        throw std::domain_error(
            "bessel_i: outside supported domain z in [0,50], nu in [0,200]");
    }

    if (z == 0.0) {
        return SeriesEval{nu == 0.0 ? 1.0 : 0.0, 1, 0.0};
    }

    const double half = z / 2.0;
    const double log_half = std::log(half);
    // term_k = (z/2)^{2k+nu} / (k! Gamma(nu+k+1)), all terms positive.
    double log_term = nu * log_half - log_gamma(nu + 1.0);
    double term = std::exp(log_term);
    double sum = term;
    std::int64_t k = 0;

    for (;;) {
        // Next term and the geometric ratio valid for all later terms.
        const double next = term * half * half / ((k + 1.0) * (nu + k + 1.0));
        const double ratio = half * half / ((k + 2.0) * (nu + k + 2.0));
        if (ratio < 1.0) {
            const double tail = next / (1.0 - ratio);
            if (tail <= tol) {
                return SeriesEval{sum, k + 1, tail};
            }
        }
        term = next;
        sum += term;
        ++k;
        if (k > 100000) {
            throw std::runtime_error("bessel_i: series failed to converge");
        }
    }
}

double gegenbauer(int l, double lam, double x) {
    if (l < 0) throw std::domain_error("gegenbauer: l must be >= 0");
    if (!(lam > 0.0)) throw std::domain_error("gegenbauer: lam must be > 0");
    if (l == 0) return 1.0;
    double c_prev = 1.0;
    double c_cur = 2.0 * lam * x;
    for (int k = 2; k <= l; ++k) {
        const double c_next =
            (2.0 * (k + lam - 1.0) * x * c_cur - (k + 2.0 * lam - 2.0) * c_prev) / k;
        c_prev = c_cur;
        c_cur = c_next;
    }
    return c_cur;
}

}  // namespace heatlab::specfun
