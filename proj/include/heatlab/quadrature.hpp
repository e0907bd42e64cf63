#pragma once

#include <functional>
#include <vector>

namespace heatlab::quadrature {

struct Rule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights on [-1,1]; cached per order.
const Rule& gauss_legendre(int n);

/// Integrate f over [a,b] with an n-node Gauss-Legendre rule.
double integrate(const std::function<double(double)>& f, double a, double b, int n);

}  // namespace heatlab::quadrature
