#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "heatlab/experiments.hpp"
#include "heatlab/heat_kernel.hpp"
#include "heatlab/model_space.hpp"

namespace {

std::vector<double> parse_t_grid(const std::string& text) {
    // lo:hi:n, log-spaced.
    const auto a = text.find(':');
    const auto b = text.rfind(':');
    if (a == std::string::npos || a == b) {
        throw CLI::ValidationError("--t-grid", "expected lo:hi:n");
    }
    const double lo = std::stod(text.substr(0, a));
    const double hi = std::stod(text.substr(a + 1, b - a - 1));
    const int n = std::stoi(text.substr(b + 1));
    if (!(lo > 0.0) || !(hi >= lo) || n < 1) {
        throw CLI::ValidationError("--t-grid", "need 0 < lo <= hi and n >= 1");
    }
    std::vector<double> g;
    for (int i = 0; i < n; ++i) {
        g.push_back(lo * std::pow(hi / lo, n == 1 ? 0.0 : static_cast<double>(i) / (n - 1)));
    }
    return g;
}

heatlab::Point parse_point(const std::string& text) {
    heatlab::Point p;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string tok =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!tok.empty()) p.coords.push_back(std::stod(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"heatlab: heat kernels, pullback metrics, and immersion checks on model spaces"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run a named scenario and write a report");
    std::string scenario, space_expr, t_grid_expr, out_json, out_csv;
    double tol = 1e-8, r_param = 0.5;
    run->add_option("scenario", scenario, "one of: ihki-sphere ihki-product example-4-5 "
                                          "cone-flatness asymptotics trace-identity "
                                          "takahashi halfspace theta-table s1xr")
        ->required();
    run->add_option("--space", space_expr, "model space expression, e.g. sphere(2,1.0)");
    run->add_option("--t-grid", t_grid_expr, "log-spaced grid lo:hi:n");
    run->add_option("--tol", tol, "evaluation tolerance");
    run->add_option("--r", r_param, "circle radius for example-4-5 / theta-table");
    run->add_option("--out", out_json, "JSON report path (default: stdout)");
    run->add_option("--csv", out_csv, "CSV grid output path");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "evaluate the heat kernel at one input");
    std::string eval_space, eval_x, eval_y;
    double eval_t = 1.0, eval_tol = 1e-10;
    eval_cmd->add_option("--space", eval_space)->required();
    eval_cmd->add_option("--x", eval_x, "comma-separated coordinates")->required();
    eval_cmd->add_option("--y", eval_y, "comma-separated coordinates")->required();
    eval_cmd->add_option("--t", eval_t)->required();
    eval_cmd->add_option("--tol", eval_tol);

    // spectrum
    auto* spec_cmd = app.add_subcommand("spectrum", "print the eigenvalue table");
    std::string spec_space;
    int levels = 10;
    spec_cmd->add_option("--space", spec_space)->required();
    spec_cmd->add_option("--levels", levels);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            heatlab::experiments::ScenarioOptions opt;
            if (!space_expr.empty()) opt.space = heatlab::ModelSpace::parse(space_expr);
            if (!t_grid_expr.empty()) opt.t_grid = parse_t_grid(t_grid_expr);
            opt.tol = tol;
            opt.r = r_param;
            opt.out_json = out_json;
            opt.out_csv = out_csv;
            return heatlab::experiments::run_scenario(scenario, opt);
        }
        if (eval_cmd->parsed()) {
            const auto space = heatlab::ModelSpace::parse(eval_space);
            const auto kv = heatlab::evaluate(space, parse_point(eval_x),
                                              parse_point(eval_y), eval_t, eval_tol);
            nlohmann::json doc = {{"space", space.str()},
                                  {"t", eval_t},
                                  {"value", kv.value},
                                  {"cert",
                                   {{"terms_used", kv.cert.terms_used},
                                    {"tail_bound", kv.cert.tail_bound},
                                    {"target_tol", kv.cert.target_tol}}}};
            std::printf("%s\n", doc.dump(2).c_str());
            return 0;
        }
        if (spec_cmd->parsed()) {
            const auto space = heatlab::ModelSpace::parse(spec_space);
            std::printf("%-8s %-22s %s\n", "level", "eigenvalue", "multiplicity");
            for (const auto& lv : space.spectrum(levels)) {
                std::printf("%-8d %-22.15g %lld\n", lv.index, lv.mu,
                            static_cast<long long>(lv.mult));
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
