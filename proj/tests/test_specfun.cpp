#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "heatlab/specfun.hpp"

using heatlab::specfun::bessel_i;
using heatlab::specfun::gegenbauer;
using heatlab::specfun::log_gamma;

namespace {

// Long-double reference sum of the ascending series, far past truncation.
double bessel_i_oracle(double nu, double z) {
    long double sum = 0.0L;
    const long double half = static_cast<long double>(z) / 2.0L;
    for (int k = 0; k < 120; ++k) {
        const long double lt = (2 * k + nu) * std::log(half) -
                               std::lgamma(static_cast<long double>(k) + 1.0L) -
                               std::lgamma(static_cast<long double>(k) + nu + 1.0L);
        sum += std::exp(lt);
    }
    return static_cast<double>(sum);
}

double binomial(int n, int k) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v *= static_cast<double>(n - k + i) / i;
    return v;
}

}  // namespace

TEST_CASE("bessel_i matches half-integer closed forms") {
    // I_{1/2}(z) = sqrt(2/(pi z)) sinh z
    for (double z : {0.25, 1.0, 4.0, 20.0}) {
        const double exact = std::sqrt(2.0 / (std::numbers::pi * z)) * std::sinh(z);
        const auto got = bessel_i(0.5, z, 1e-14);
        CHECK(got.value == doctest::Approx(exact).epsilon(1e-12));
    }
    // I_{3/2}(z) = sqrt(2/(pi z)) (cosh z - sinh z / z)
    const double z = 2.0;
    const double exact =
        std::sqrt(2.0 / (std::numbers::pi * z)) * (std::cosh(z) - std::sinh(z) / z);
    CHECK(bessel_i(1.5, z, 1e-14).value == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("bessel_i fixed values") {
    CHECK(bessel_i(0.0, 1.0, 1e-15).value == doctest::Approx(1.2660658777520084).epsilon(1e-13));
    CHECK(bessel_i(1.0, 1.0, 1e-15).value == doctest::Approx(0.5651591039924851).epsilon(1e-13));
    CHECK(bessel_i(2.0, 3.0, 1e-15).value == doctest::Approx(2.2452124409299514).epsilon(1e-13));
}

TEST_CASE("bessel_i at z = 0") {
    CHECK(bessel_i(0.0, 0.0, 1e-12).value == 1.0);
    CHECK(bessel_i(2.5, 0.0, 1e-12).value == 0.0);
}

TEST_CASE("bessel_i rejects out-of-domain arguments") {
    CHECK_THROWS_AS(bessel_i(-0.5, 1.0, 1e-10), std::domain_error);
    CHECK_THROWS_AS(bessel_i(0.0, 51.0, 1e-10), std::domain_error);
    CHECK_THROWS_AS(bessel_i(201.0, 1.0, 1e-10), std::domain_error);
}

TEST_CASE("bessel_i certified tail bound holds against the oracle") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unu(0.0, 200.0), uz(0.0, 50.0),
        utol(-14.0, -5.0);
    for (int i = 0; i < 1000; ++i) {
        const double nu = unu(rng);
        const double z = uz(rng);
        const double tol = std::pow(10.0, utol(rng));
        const auto got = bessel_i(nu, z, tol);
        const double ref = bessel_i_oracle(nu, z);
        CHECK(std::abs(got.value - ref) <= got.tail_bound + 1e-13 * std::abs(ref));
        CHECK(got.tail_bound <= tol);
        CHECK(got.terms_used >= 1);
    }
}

TEST_CASE("gegenbauer lambda=1 reduces to Chebyshev U") {
    // C_l^1(cos a) = sin((l+1)a) / sin(a)
    for (int l : {1, 2, 5, 10}) {
        for (double a : {0.3, 1.0, 2.5}) {
            const double exact = std::sin((l + 1) * a) / std::sin(a);
            CHECK(gegenbauer(l, 1.0, std::cos(a)) == doctest::Approx(exact).epsilon(1e-12));
        }
    }
    CHECK(gegenbauer(5, 1.0, 1.0) == doctest::Approx(6.0));
}

TEST_CASE("gegenbauer value at x = 1 is binom(l + 2 lam - 1, l)") {
    CHECK(gegenbauer(3, 1.5, 1.0) == doctest::Approx(binomial(5, 3)).epsilon(1e-13));
    CHECK(gegenbauer(4, 0.5, 1.0) == doctest::Approx(binomial(4, 4)).epsilon(1e-13));
    CHECK(gegenbauer(6, 2.5, 1.0) == doctest::Approx(binomial(10, 6)).epsilon(1e-13));
}

TEST_CASE("gegenbauer low orders match explicit polynomials") {
    const double lam = 1.7, x = -0.42;
    CHECK(gegenbauer(0, lam, x) == doctest::Approx(1.0));
    CHECK(gegenbauer(1, lam, x) == doctest::Approx(2.0 * lam * x));
    CHECK(gegenbauer(2, lam, x) ==
          doctest::Approx(2.0 * lam * (lam + 1.0) * x * x - lam).epsilon(1e-13));
}

TEST_CASE("log_gamma fixed values") {
    CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-14));
    CHECK(log_gamma(1.0) == doctest::Approx(0.0));
    CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
    CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
}
