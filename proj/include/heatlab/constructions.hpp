#pragma once

namespace heatlab::constructions {

struct HalfSpaceSample {
    int n = 1;
    double x_n = 0.0;
    double t = 0.0;
    double value = 0.0;  // normal-normal component of g_t
};

/// c1(n) = (4 (8 pi)^{n/2})^{-1}, the scalar of t^{(n+2)/2} g_t on flat space.
double flat_constant(int n);

/// c1(n) recomputed by Gauss-Legendre quadrature of the squared kernel
/// derivative; agrees with flat_constant to ~1e-12.
double flat_constant_by_quadrature(int n);

/// Normal-normal component of g_t on the half-space with the Neumann
/// reflection kernel:
///   c1(n) t^{-(n+2)/2} (1 - E + (x_n^2/t) E),  E = exp(-x_n^2 / 2t).
/// Vanishes at the boundary and tends to the interior constant as x_n grows.
HalfSpaceSample halfspace_gt_normal(int n, double x_n, double t);

/// Quadrature oracle for the same component, integrating
/// (d/dx_n rho(x,y,t))^2 over the half-space with the reflection kernel.
double halfspace_gt_normal_by_quadrature(int n, double x_n, double t);

}  // namespace heatlab::constructions
