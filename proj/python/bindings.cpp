#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "heatlab/constructions.hpp"
#include "heatlab/experiments.hpp"
#include "heatlab/heat_kernel.hpp"
#include "heatlab/model_space.hpp"
#include "heatlab/pullback.hpp"

namespace py = pybind11;
using namespace heatlab;

namespace {

Point to_point(const std::vector<double>& coords) { return Point{coords}; }

py::dict cert_dict(const TruncationCertificate& c) {
    py::dict d;
    d["terms_used"] = c.terms_used;
    d["tail_bound"] = c.tail_bound;
    d["target_tol"] = c.target_tol;
    return d;
}

py::dict kernel_dict(const KernelValue& kv) {
    py::dict d;
    d["value"] = kv.value;
    d["cert"] = cert_dict(kv.cert);
    return d;
}

}  // namespace

PYBIND11_MODULE(_heatlab, m) {
    m.doc() = "heat kernels, pullback metrics, and immersion checks on model spaces";

    py::class_<ModelSpace>(m, "ModelSpace")
        .def_static("parse", &ModelSpace::parse, py::arg("text"))
        .def_static("circle", &ModelSpace::circle, py::arg("r"))
        .def_static("sphere", &ModelSpace::sphere, py::arg("n"), py::arg("k"))
        .def_static("euclidean", &ModelSpace::euclidean, py::arg("n"))
        .def_static("half_space", &ModelSpace::half_space, py::arg("n"))
        .def_static("product", &ModelSpace::product)
        .def_static("cone", &ModelSpace::cone)
        .def_static("rescaled", &ModelSpace::rescaled, py::arg("base"), py::arg("a"),
                    py::arg("b"))
        .def_property_readonly("dim", &ModelSpace::dim)
        .def_property_readonly("compact", &ModelSpace::compact)
        .def("volume", &ModelSpace::volume)
        .def("distance",
             [](const ModelSpace& s, const std::vector<double>& x,
                const std::vector<double>& y) {
                 return s.distance(to_point(x), to_point(y));
             })
        .def("spectrum",
             [](const ModelSpace& s, int max_level) {
                 py::list out;
                 for (const auto& lv : s.spectrum(max_level)) {
                     out.append(py::make_tuple(lv.mu, lv.mult));
                 }
                 return out;
             },
             py::arg("max_level"))
        .def("eigenspace_sum_at_distance", &ModelSpace::eigenspace_sum_at_distance,
             py::arg("level"), py::arg("dist"))
        .def("__str__", &ModelSpace::str)
        .def("__repr__",
             [](const ModelSpace& s) { return "ModelSpace('" + s.str() + "')"; })
        .def("__eq__", [](const ModelSpace& a, const ModelSpace& b) { return a == b; });

    m.def("evaluate",
          [](const ModelSpace& s, const std::vector<double>& x,
             const std::vector<double>& y, double t, double tol) {
              return kernel_dict(evaluate(s, to_point(x), to_point(y), t, tol));
          },
          py::arg("space"), py::arg("x"), py::arg("y"), py::arg("t"),
          py::arg("tol") = 1e-10);
    m.def("heat_trace",
          [](const ModelSpace& s, double t, double tol) {
              return kernel_dict(heat_trace(s, t, tol));
          },
          py::arg("space"), py::arg("t"), py::arg("tol") = 1e-10);
    m.def("energy_trace",
          [](const ModelSpace& s, double t, double tol) {
              return kernel_dict(energy_trace(s, t, tol));
          },
          py::arg("space"), py::arg("t"), py::arg("tol") = 1e-10);
    m.def("diagonal",
          [](const ModelSpace& s, const std::vector<double>& p, double t, double tol) {
              return kernel_dict(diagonal(s, to_point(p), t, tol));
          },
          py::arg("space"), py::arg("p"), py::arg("t"), py::arg("tol") = 1e-10);

    m.def("pullback_scalar", &pullback_scalar, py::arg("space"), py::arg("t"),
          py::arg("tol") = 1e-12);
    m.def("flat_pullback_scalar", &flat_pullback_scalar, py::arg("n"), py::arg("t"));
    m.def("c_of_t", &c_of_t, py::arg("space"), py::arg("t"), py::arg("tol") = 1e-12);
    m.def("ihki_check",
          [](const ModelSpace& s, const std::vector<double>& t_grid, double threshold,
             double tol) {
              const auto rep = ihki_check(s, t_grid, threshold, tol);
              py::dict d;
              d["t_grid"] = rep.t_grid;
              d["deviations"] = rep.deviations;
              d["sup_deviation"] = rep.sup_deviation;
              d["verdict"] = rep.verdict == ImmersionVerdict::IhkiConsistent
                                 ? "ihki-consistent"
                                 : rep.verdict == ImmersionVerdict::SingleTimeOnly
                                       ? "single-time-only"
                                       : "fails";
              return d;
          },
          py::arg("space"), py::arg("t_grid"), py::arg("threshold"),
          py::arg("tol") = 1e-12);
    m.def("eigenspace_immersion",
          [](const ModelSpace& s, int level) {
              const auto rep = eigenspace_immersion(s, level);
              py::dict d;
              d["lambda"] = rep.lambda;
              d["mult"] = rep.mult;
              d["on_sphere_deviation"] = rep.on_sphere_deviation;
              d["metric_deviation"] = rep.metric_deviation;
              return d;
          },
          py::arg("space"), py::arg("level"));
    m.def("trace_derivative_check", &trace_derivative_check, py::arg("space"),
          py::arg("t"), py::arg("h") = 1e-4);
    m.def("product_diagonal_defect", &product_diagonal_defect, py::arg("a"), py::arg("b"),
          py::arg("t"), py::arg("tol") = 1e-13);

    m.def("flat_constant", &constructions::flat_constant, py::arg("n"));
    m.def("halfspace_gt_normal",
          [](int n, double x_n, double t) {
              return constructions::halfspace_gt_normal(n, x_n, t).value;
          },
          py::arg("n"), py::arg("x_n"), py::arg("t"));

    m.def("example_4_5",
          [](double r, double tol) {
              const auto res = experiments::example_4_5(r, tol);
              py::dict d;
              d["r"] = res.r;
              d["s"] = res.s;
              d["calibration_residual"] = res.calibration_residual;
              d["t_star"] = res.t_star;
              d["product_deviation_at_t_star"] = res.product_deviation_at_t_star;
              d["witness_t"] = res.witness_t;
              d["witness_defect"] = res.witness_defect;
              return d;
          },
          py::arg("r"), py::arg("tol") = 1e-10);
    m.def("scenario_names", [] { return experiments::scenario_names(); });
    m.def("run_scenario",
          [](const std::string& name, const std::string& out_json,
             const std::string& out_csv, double tol, double r) {
              experiments::ScenarioOptions opt;
              opt.out_json = out_json;
              opt.out_csv = out_csv;
              opt.tol = tol;
              opt.r = r;
              return experiments::run_scenario(name, opt);
          },
          py::arg("name"), py::arg("out_json") = "", py::arg("out_csv") = "",
          py::arg("tol") = 1e-8, py::arg("r") = 0.5);
}
