#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heatlab/model_space.hpp"
#include "heatlab/pullback.hpp"

namespace heatlab::experiments {

struct Example45Result {
    double r = 0.0;
    double s = 0.0;                 // calibrated sphere radius
    double calibration_residual = 0.0;  // |G(s)| relative to the target
    double t_star = 1.0;
    double product_deviation_at_t_star = 0.0;
    double witness_t = 0.0;
    double witness_defect = 0.0;    // relative gap in the product-diagonal identity
};

/// Calibrates s so that c(1) rho_2 matches between circle(r) and sphere(2,s),
/// certifies the single-time isometric immersion of the product at t = 1,
/// and exhibits a diagonal-identity defect at some other probed time.
Example45Result example_4_5(double r, double tol);

struct ThetaRow {
    double t = 0.0;         // scaled time r^{-2} t
    double torus_sum = 0.0;     // sum over nonzero torus eigenvalues
    double sphere_sum = 0.0;
    double torus_weighted = 0.0;   // volume-weighted full sums
    double sphere_weighted = 0.0;
    double torus_scaled = 0.0;     // exp(2 tau) * sum
    double sphere_scaled = 0.0;
};

/// Theta-function comparison behind the Example 4.5 contradiction, in the
/// s = r scenario.
std::vector<ThetaRow> torus_vs_sphere_theta(double r, const std::vector<double>& t_list);

struct ScenarioOptions {
    std::optional<ModelSpace> space;
    std::vector<double> t_grid;  // empty selects the scenario default
    double tol = 1e-8;
    double r = 0.5;
    std::string out_json;
    std::string out_csv;
};

const std::vector<std::string>& scenario_names();

/// Runs a named scenario, writes the JSON report (and optional CSV), and
/// returns 0 iff every scenario invariant holds.
int run_scenario(const std::string& name, const ScenarioOptions& options);

}  // namespace heatlab::experiments
