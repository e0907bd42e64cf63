#pragma once

#include <cstdint>

namespace heatlab::specfun {

/// Result of a truncated series evaluation together with a certified
/// bound on the discarded tail.
struct SeriesEval {
    double value = 0.0;
    std::int64_t terms_used = 0;
    double tail_bound = 0.0;
};

/// Modified Bessel function of the first kind, evaluated by its defining
/// ascending series.  The tail bound comes from geometric domination of
/// the term ratio (z/2)^2 / ((k+1)(nu+k+1)).
///
/// Supported domain: z in [0, 50], nu in [0, 200]; outside it a
/// std::domain_error is thrown.  tol is absolute.
SeriesEval bessel_i(double nu, double z, double tol);

/// Gegenbauer polynomial C_l^{lam}(x) by the standard three-term recurrence.
double gegenbauer(int l, double lam, double x);

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

}  // namespace heatlab::specfun
