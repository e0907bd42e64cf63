// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "heatlab/constructions.hpp"
#include "heatlab/experiments.hpp"
#include "heatlab/heat_kernel.hpp"
#include "heatlab/model_space.hpp"
#include "heatlab/pullback.hpp"
#include "heatlab/quadrature.hpp"

using namespace heatlab;

namespace {

constexpr double kPi = std::numbers::pi;
int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s  %-28s %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    if (!pass) ++failures;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
    return g;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

void cone_flatness() {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> ur(0.0, 2.0), ua(0.0, 2.0 * kPi),
        upol(0.0, kPi);
    const double ts[] = {0.1, 0.5, 1.0, 2.0};

    const auto cone2 = ModelSpace::cone(ModelSpace::circle(1.0));
    double max2 = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double r1 = ur(rng), r2 = ur(rng), a1 = ua(rng), a2 = ua(rng);
        const Point x{{r1, a1}}, y{{r2, a2}};
        const double d = cone2.distance(x, y);
        for (double t : ts) {
            const double got = evaluate(cone2, x, y, t, 1e-11).value;
            const double want = std::exp(-d * d / (4.0 * t)) / (4.0 * kPi * t);
            max2 = std::max(max2, std::abs(got - want));
        }
    }

    const auto cone3 = ModelSpace::cone(ModelSpace::sphere(2, 1.0));
    double max3 = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double r1 = ur(rng), r2 = ur(rng);
        const double th1 = upol(rng), th2 = upol(rng), ph1 = ua(rng), ph2 = ua(rng);
        const Point x{{r1, std::sin(th1) * std::cos(ph1), std::sin(th1) * std::sin(ph1),
                       std::cos(th1)}};
        const Point y{{r2, std::sin(th2) * std::cos(ph2), std::sin(th2) * std::sin(ph2),
                       std::cos(th2)}};
        const double d = cone3.distance(x, y);
        for (double t : ts) {
            const double got = evaluate(cone3, x, y, t, 1e-10).value;
            const double want =
                std::pow(4.0 * kPi * t, -1.5) * std::exp(-d * d / (4.0 * t));
            max3 = std::max(max3, std::abs(got - want));
        }
    }
    report("cone-flatness", max2 <= 1e-8 && max3 <= 1e-7,
           "max |cone - flat|: R2 " + fmt(max2) + ", R3 " + fmt(max3));
}

void cone_diagonal() {
    const auto cone = ModelSpace::cone(ModelSpace::circle(1.0));
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double r = 0.05 + 0.1 * i;
        const Point p{{r, 0.37 * i}};
        for (double t : {0.25, 1.0, 4.0}) {
            const double got = evaluate(cone, p, p, t, 1e-11).value;
            worst = std::max(worst, std::abs(got - 1.0 / (4.0 * kPi * t)));
        }
    }
    report("cone-diagonal-constancy", worst <= 1e-9, "max deviation " + fmt(worst));
}

void semigroup_and_mass() {
    double worst_sg = 0.0, worst_mass = 0.0;

    const auto c = ModelSpace::circle(1.0);
    for (auto [t, s] : {std::pair{0.3, 0.7}, std::pair{1.0, 1.0}}) {
        const double want = evaluate(c, {{0.0}}, {{1.2}}, t + s, 1e-13).value;
        const double got = quadrature::integrate(
            [&, t = t, s = s](double th) {
                return evaluate(c, {{0.0}}, {{th}}, t, 1e-13).value *
                       evaluate(c, {{th}}, {{1.2}}, s, 1e-13).value;
            },
            0.0, 2.0 * kPi, 256);
        worst_sg = std::max(worst_sg, std::abs(got - want));
        const double mass = quadrature::integrate(
            [&, t = t](double th) { return evaluate(c, {{0.4}}, {{th}}, t, 1e-13).value; },
            0.0, 2.0 * kPi, 256);
        worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
    }

    // Sphere: place x at the pole; by symmetry integrate over (polar, azimuth).
    const auto s2 = ModelSpace::sphere(2, 1.0);
    const Point north{{0, 0, 1}};
    const double beta = 1.0;
    const Point ypt{{std::sin(beta), 0.0, std::cos(beta)}};
    for (auto [t, s] : {std::pair{0.3, 0.7}, std::pair{1.0, 1.0}}) {
        const double want = evaluate(s2, north, ypt, t + s, 1e-13).value;
        const double got = quadrature::integrate(
            [&, t = t, s = s](double th) {
                const double inner = quadrature::integrate(
                    [&](double ph) {
                        const Point z{{std::sin(th) * std::cos(ph),
                                       std::sin(th) * std::sin(ph), std::cos(th)}};
                        return evaluate(s2, north, z, t, 1e-13).value *
                               evaluate(s2, z, ypt, s, 1e-13).value;
                    },
                    0.0, 2.0 * kPi, 256);
                return inner * std::sin(th);
            },
            0.0, kPi, 256);
        worst_sg = std::max(worst_sg, std::abs(got - want));
        const double mass = quadrature::integrate(
            [&, t = t](double th) {
                return 2.0 * kPi * std::sin(th) *
                       evaluate(s2, north, {{std::sin(th), 0.0, std::cos(th)}}, t, 1e-13)
                           .value;
            },
            0.0, kPi, 256);
        worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
    }
    report("semigroup-and-mass", worst_sg <= 1e-7 && worst_mass <= 1e-8,
           "semigroup " + fmt(worst_sg) + ", mass " + fmt(worst_mass));
}

void ihki_certification() {
    const auto grid = log_grid(0.05, 20.0, 33);
    bool ok = true;
    double sup = 0.0;
    for (const auto& space :
         {ModelSpace::sphere(2, 1.0), ModelSpace::sphere(3, 0.5),
          ModelSpace::product(ModelSpace::sphere(2, 1.0), ModelSpace::sphere(2, 1.0))}) {
        const auto rep = ihki_check(space, grid, 1e-8);
        ok = ok && rep.verdict == ImmersionVerdict::IhkiConsistent &&
             rep.sup_deviation <= 1e-8;
        sup = std::max(sup, rep.sup_deviation);
    }
    report("ihki-certification", ok, "sup deviation " + fmt(sup));
}

void example_45_sharpness() {
    const auto res = experiments::example_4_5(0.5, 1e-10);
    const auto product = ModelSpace::product(ModelSpace::circle(0.5),
                                             ModelSpace::sphere(2, res.s));
    const auto rep = ihki_check(product, {0.25, 0.5, 1.0, 2.0, 4.0}, 1e-8);
    const bool ok = res.calibration_residual <= 1e-10 &&
                    res.product_deviation_at_t_star <= 1e-8 &&
                    res.witness_defect > 1e-3 &&
                    rep.verdict == ImmersionVerdict::SingleTimeOnly;
    report("example-4-5-sharpness", ok,
           "s " + fmt(res.s) + ", residual " + fmt(res.calibration_residual) +
               ", t=1 deviation " + fmt(res.product_deviation_at_t_star) + ", defect " +
               fmt(res.witness_defect));
}

void small_time_asymptotics() {
    const auto f2 = small_t_asymptotics(ModelSpace::sphere(2, 1.0), 1e-3, 1e-2, 16);
    const auto f3 = small_t_asymptotics(ModelSpace::sphere(3, 1.0), 1e-3, 1e-2, 16);
    const bool ok = std::abs(f2.constant - 1.0) <= 0.01 && std::abs(f2.slope) <= 0.05 &&
                    std::abs(f3.constant - 1.0) <= 0.01 &&
                    std::abs(f3.slope - 2.0 / 3.0) <= 0.05 * (2.0 / 3.0);
    report("small-time-asymptotics", ok,
           "n=2: " + fmt(f2.constant) + " + " + fmt(f2.slope) + " t;  n=3: " +
               fmt(f3.constant) + " + " + fmt(f3.slope) + " t");
}

void flat_constant_check() {
    double worst = 0.0;
    for (int n : {1, 2, 3}) {
        const double v = constructions::flat_constant_by_quadrature(n) * 4.0 *
                         std::pow(8.0 * kPi, n / 2.0);
        worst = std::max(worst, std::abs(v - 1.0));
    }
    report("flat-constant", worst <= 1e-9, "max |4 (8 pi)^{n/2} c1 - 1| " + fmt(worst));
}

void trace_derivative() {
    double worst = 0.0;
    for (const auto& space : {ModelSpace::circle(1.0), ModelSpace::sphere(2, 1.0)}) {
        for (double t : {0.5, 1.0, 2.0}) {
            worst = std::max(worst, trace_derivative_check(space, t, 1e-4));
        }
    }
    report("trace-derivative-identity", worst <= 1e-6, "max defect " + fmt(worst));
}

void normalized_diagonal_decay() {
    const auto s2 = ModelSpace::sphere(2, 1.0);
    bool decreasing = true;
    double prev = std::numeric_limits<double>::infinity();
    double last = 0.0;
    for (double t : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0}) {
        const double tol = std::max(1e-300, 1e-12 * std::exp(-4.0 * t));
        const double rho = heat_trace(s2, 2.0 * t, tol).value / s2.volume();
        const double q = t / (c_of_t(s2, t, tol) * rho);
        if (q >= prev) decreasing = false;
        prev = q;
        last = q;
    }
    report("normalized-diagonal-decay", decreasing && last < 1e-6,
           "value at t=50: " + fmt(last));
}

void halfspace_boundary() {
    const double near = constructions::halfspace_gt_normal(3, 1e-4, 1.0).value;
    const double far = constructions::halfspace_gt_normal(3, 50.0, 1.0).value;
    const double interior = constructions::flat_constant(3);
    const double quad_gap =
        std::abs(constructions::halfspace_gt_normal(3, 1.0, 1.0).value -
                 constructions::halfspace_gt_normal_by_quadrature(3, 1.0, 1.0));
    const bool ok =
        near <= 1e-7 && std::abs(far - interior) <= 1e-10 && quad_gap <= 1e-6;
    report("halfspace-degeneration", ok,
           "boundary " + fmt(near) + ", interior gap " + fmt(std::abs(far - interior)) +
               ", quadrature gap " + fmt(quad_gap));
}

void truncation_honesty() {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0), ut(0.1, 3.0), utol(-11.0, -6.0);
    const std::vector<ModelSpace> spaces = {
        ModelSpace::circle(1.0),
        ModelSpace::sphere(2, 1.0),
        ModelSpace::sphere(3, 0.8),
        ModelSpace::euclidean(2),
        ModelSpace::half_space(2),
        ModelSpace::cone(ModelSpace::circle(0.9)),
        ModelSpace::cone(ModelSpace::sphere(2, 1.0)),
        ModelSpace::product(ModelSpace::circle(1.0), ModelSpace::sphere(2, 1.0)),
        ModelSpace::rescaled(ModelSpace::sphere(2, 1.0), 1.5, 2.0),
    };
    auto rand_point = [&](const ModelSpace& s) {
        std::vector<double> v;
        std::function<void(const ModelSpace&)> fill = [&](const ModelSpace& sp) {
            switch (sp.kind()) {
                case Kind::Circle: v.push_back(2.0 * kPi * u(rng)); break;
                case Kind::Sphere: {
                    std::normal_distribution<double> g;
                    std::vector<double> w(sp.dim() + 1);
                    double norm = 0.0;
                    for (auto& c : w) { c = g(rng); norm += c * c; }
                    for (auto& c : w) v.push_back(c * sp.radius() / std::sqrt(norm));
                    break;
                }
                case Kind::Euclidean:
                    for (int i = 0; i < sp.dim(); ++i) v.push_back(3.0 * u(rng) - 1.5);
                    break;
                case Kind::HalfSpace:
                    for (int i = 0; i + 1 < sp.dim(); ++i) v.push_back(3.0 * u(rng) - 1.5);
                    v.push_back(2.0 * u(rng) + 0.05);
                    break;
                case Kind::Cone: v.push_back(2.0 * u(rng)); fill(sp.left()); break;
                case Kind::Product: fill(sp.left()); fill(sp.right()); break;
                case Kind::Rescaled: fill(sp.left()); break;
            }
        };
        fill(s);
        return Point{v};
    };
    int checked = 0;
    double worst_excess = 0.0;
    while (checked < 500) {
        const auto& s = spaces[checked % spaces.size()];
        const auto x = rand_point(s), y = rand_point(s);
        const double t = ut(rng);
        const double tol = std::pow(10.0, utol(rng));
        const auto coarse = evaluate(s, x, y, t, tol);
        const auto fine = evaluate(s, x, y, t, tol / 100.0);
        const double diff = std::abs(coarse.value - fine.value);
        const double bound = coarse.cert.tail_bound + fine.cert.tail_bound + 1e-16;
        worst_excess = std::max(worst_excess, diff - bound);
        ++checked;
    }
    report("truncation-honesty", worst_excess <= 0.0,
           "500 evaluations, worst excess over bound " + fmt(worst_excess));
}

void takahashi() {
    const auto rep = eigenspace_immersion(ModelSpace::sphere(2, 1.0), 1);
    const bool ok = std::abs(rep.lambda - 2.0) <= 1e-12 &&
                    rep.on_sphere_deviation <= 1e-9 && rep.metric_deviation <= 1e-9;
    report("takahashi-immersion", ok,
           "lambda " + fmt(rep.lambda) + ", |Phi|^2 deviation " +
               fmt(rep.on_sphere_deviation) + ", metric deviation " +
               fmt(rep.metric_deviation));
}

}  // namespace

int main() {
    cone_flatness();
    cone_diagonal();
    semigroup_and_mass();
    ihki_certification();
    example_45_sharpness();
    small_time_asymptotics();
    flat_constant_check();
    trace_derivative();
    normalized_diagonal_decay();
    halfspace_boundary();
    truncation_honesty();
    takahashi();
    if (failures) std::printf("%d criteria FAILED\n", failures);
    else std::printf("all 12 criteria passed\n");
    return failures ? 1 : 0;
}
