#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <numbers>

#include "heatlab/constructions.hpp"

using namespace heatlab::constructions;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("flat constant closed forms") {
    CHECK(flat_constant(1) == doctest::Approx(1.0 / (4.0 * std::sqrt(8.0 * kPi))).epsilon(1e-15));
    CHECK(flat_constant(2) == doctest::Approx(1.0 / (32.0 * kPi)).epsilon(1e-15));
    CHECK(flat_constant(3) ==
          doctest::Approx(1.0 / (4.0 * std::pow(8.0 * kPi, 1.5))).epsilon(1e-15));
    CHECK_THROWS(flat_constant(0));
}

TEST_CASE("flat constant agrees with the quadrature oracle") {
    for (int n = 1; n <= 4; ++n) {
        CHECK(flat_constant_by_quadrature(n) ==
              doctest::Approx(flat_constant(n)).epsilon(1e-11));
    }
    CHECK_THROWS(flat_constant_by_quadrature(7));
}

TEST_CASE("halfspace normal component degenerates at the boundary") {
    for (int n : {1, 2, 3}) {
        const double near = halfspace_gt_normal(n, 1e-5, 1.0).value;
        CHECK(near <= 1e-9);
        const double interior = halfspace_gt_normal(n, 40.0, 1.0).value;
        CHECK(interior == doctest::Approx(flat_constant(n)).epsilon(1e-12));
    }
    CHECK_THROWS(halfspace_gt_normal(2, -1.0, 1.0));
    CHECK_THROWS(halfspace_gt_normal(2, 1.0, 0.0));
}

TEST_CASE("halfspace closed form matches the reflection-kernel quadrature") {
    for (int n : {1, 3}) {
        for (double x : {0.2, 1.0, 3.0}) {
            for (double t : {0.5, 1.0, 2.0}) {
                CHECK(halfspace_gt_normal(n, x, t).value ==
                      doctest::Approx(halfspace_gt_normal_by_quadrature(n, x, t))
                          .epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("halfspace normal component increases away from the boundary") {
    // The profile 1 - E + (x^2/t) E grows on 0 < x < sqrt(3t).
    const double t = 1.0;
    double prev = 0.0;
    for (double x = 0.05; x < std::sqrt(3.0 * t); x += 0.05) {
        const double v = halfspace_gt_normal(2, x, t).value;
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("halfspace component is self-similar in x^2 / t") {
    // t^{(n+2)/2} g_t(x) depends on x and t only through x^2 / t.
    const int n = 2;
    const double a = halfspace_gt_normal(n, 1.0, 1.0).value * 1.0;
    const double b =
        halfspace_gt_normal(n, 2.0, 4.0).value * std::pow(4.0, (n + 2.0) / 2.0);
    CHECK(a == doctest::Approx(b).epsilon(1e-13));
}
