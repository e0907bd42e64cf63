#pragma once

#include <optional>
#include <vector>

#include "heatlab/heat_kernel.hpp"
#include "heatlab/model_space.hpp"

namespace heatlab {

/// g_t at one (point, time), recorded relative to g.  Homogeneous spaces
/// carry a single scalar; products carry one scalar per factor block in
/// the canonical product frame.
struct PullbackSample {
    double t = 0.0;
    bool scalar_form = true;
    double scalar = 0.0;
    std::vector<double> block_values;  // product case
    std::vector<int> block_dims;
};

enum class ImmersionVerdict { IhkiConsistent, SingleTimeOnly, Fails };

struct ImmersionWitness {
    double t = 0.0;
    double deviation = 0.0;
};

struct ImmersionReport {
    std::vector<double> t_grid;
    std::vector<double> c_values;
    std::vector<double> deviations;
    double sup_deviation = 0.0;
    ImmersionVerdict verdict = ImmersionVerdict::Fails;
    std::optional<ImmersionWitness> witness;
};

struct EigenmapReport {
    double on_sphere_deviation = 0.0;
    double metric_deviation = 0.0;
    double lambda = 0.0;
    std::int64_t mult = 0;
};

struct AsymptoticFit {
    double constant = 0.0;
    double slope = 0.0;
};

/// True when g_t = lambda(t) g with a point-independent scalar: circles,
/// spheres, rescalings of those, and products of equal homogeneous factors.
bool is_homogeneous(const ModelSpace& space);

/// lambda(t) with g_t = lambda(t) g on a compact homogeneous space:
/// lambda = E(t) / (n vol).
double pullback_scalar(const ModelSpace& space, double t, double tol);

/// Scalar of the flat pullback metric: c1(n) / t^{(n+2)/2}.
double flat_pullback_scalar(int n, double t);

/// Trace-normalizing constant c(t) = n vol / E(t) for compact spaces.
double c_of_t(const ModelSpace& space, double t, double tol);

/// Block-diagonal g_t of a two-factor product whose factors have constant
/// diagonal: block_i = rho^{other}_{2t} * lambda_i(t).
PullbackSample pullback_matrix(const ModelSpace& space, double t, const Point& p,
                               double tol);

/// Checks c(t) g_t = g across a t-grid; deviations are Hilbert-Schmidt
/// norms of c(t) g_t - g relative to |g| = sqrt(n).
ImmersionReport ihki_check(const ModelSpace& space, const std::vector<double>& t_grid,
                           double threshold, double tol = 1e-12);

/// Deviations of the level-l eigenmap from a round-sphere isometric
/// immersion: |Phi|^2 vs 1 and n Phi* g vs mu_l g.
EigenmapReport eigenspace_immersion(const ModelSpace& space, int level);

/// Linear fit of 4 (8 pi)^{n/2} t^{(n+2)/2} lambda(t) over a small-t window
/// on a round sphere; intercept ~ 1, slope ~ (n-1)(n-2) / (3 k^2).
AsymptoticFit small_t_asymptotics(const ModelSpace& sphere, double t_lo, double t_hi,
                                  int fit_points);

/// Defect of the identity d/dt rho_{2t} = -2 n / c(t) by central difference.
double trace_derivative_check(const ModelSpace& space, double t, double h);

/// Relative gap in (rho^A_t)^{dim B} = (rho^B_t)^{dim A}, a necessary
/// condition for the product A x B to be IHKI.
double product_diagonal_defect(const ModelSpace& a, const ModelSpace& b, double t,
                               double tol = 1e-13);

}  // namespace heatlab
