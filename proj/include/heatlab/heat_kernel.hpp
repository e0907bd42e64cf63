#pragma once

#include <cstdint>
#include <stdexcept>

#include "heatlab/model_space.hpp"

namespace heatlab {

/// Terms used and a certified bound on the discarded series tail.
struct TruncationCertificate {
    std::int64_t terms_used = 0;
    double tail_bound = 0.0;
    double target_tol = 0.0;
};

struct KernelValue {
    double value = 0.0;
    TruncationCertificate cert;
};

/// Thrown when the requested tolerance cannot be certified within the
/// configured level/term budget; carries the best certificate reached.
class BudgetError : public std::runtime_error {
public:
    BudgetError(const std::string& msg, TruncationCertificate best)
        : std::runtime_error(msg), best_certificate(best) {}
    TruncationCertificate best_certificate;
};

/// Series/term budget, from HEATLAB_MAX_LEVELS (default 100000).
std::int64_t max_levels();

/// Heat kernel rho(x, y, t) with |value - rho| <= tol, certified.
KernelValue evaluate(const ModelSpace& space, const Point& x, const Point& y,
                     double t, double tol);

/// Heat trace Z(t) = sum_l m_l exp(-mu_l t) for compact spaces.
KernelValue heat_trace(const ModelSpace& space, double t, double tol);

/// E(t) = sum_l m_l mu_l exp(-2 mu_l t) for compact spaces; equals the
/// integrated squared-gradient weight that normalizes the pullback metric.
KernelValue energy_trace(const ModelSpace& space, double t, double tol);

/// On-diagonal kernel value.  Constant in p for compact homogeneous spaces
/// (Z(t)/vol), cones, and Euclidean space; point-dependent on the half-space.
KernelValue diagonal(const ModelSpace& space, const Point& p, double t, double tol);

/// Closed-form constant value of the cone diagonal.
double cone_diagonal_constant(const ModelSpace& cone_space, double t);

}  // namespace heatlab
