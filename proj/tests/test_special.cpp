// Unit tests for the special-function layer.  The derived expectations are
// frozen from independent oracles computed here: direct quadrature of the
// Gamma integral and of the planar-moment radial integral.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fraclab/quadrature.hpp"
#include "fraclab/special.hpp"

using namespace fraclab;
using namespace fraclab::special;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Oracle: Gamma(x) by quadrature of int_0^inf t^{x-1} e^{-t} dt, split at
// t = 1 with the endpoint weight flattened.
double gamma_oracle(double x) {
    auto f = [x](double t) { return std::pow(t, x - 1.0) * std::exp(-t); };
    auto head = quad::adaptive_gk_left_singular(f, 0.0, 1.0, x - 1.0, 1e-13, 1e-13);
    auto tail = quad::adaptive_gk_to_inf(f, 1.0, 1e-13, 1e-13);
    return head.value + tail.value;
}

// Oracle: planar moment by direct radial quadrature
// omega_M int_0^inf (1+r^2)^tau r^{M-1} dr.
double planar_moment_oracle(int M, double tau) {
    auto f = [M, tau](double r) {
        return std::pow(1.0 + r * r, tau) * std::pow(r, M - 1.0);
    };
    auto res = quad::adaptive_gk_to_inf(f, 0.0, 1e-12, 1e-12);
    return sphere_measure(M) * res.value;
}

} // namespace

TEST_CASE("gamma: classical values") {
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));
    CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-13));
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("gamma: quadrature oracle at fractional arguments") {
    for (double x : {1.25, 0.3, 2.75, 7.5}) {
        CHECK(gamma_fn(x) == doctest::Approx(gamma_oracle(x)).epsilon(1e-10));
    }
}

TEST_CASE("gamma: accuracy across [0.05, 50] against recursion") {
    // Gamma(x+1) = x Gamma(x) propagated from a midrange anchor exercises
    // the approximation across the whole target interval.
    for (double x = 0.05; x <= 49.0; x += 0.7604) {
        const double lhs = gamma_fn(x + 1.0);
        const double rhs = x * gamma_fn(x);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("gamma: reflection identity on (0,1)") {
    for (double s = 0.05; s < 1.0; s += 0.05) {
        const double prod = gamma_fn(s) * gamma_fn(1.0 - s) * std::sin(kPi * s);
        CHECK(prod == doctest::Approx(kPi).epsilon(1e-12));
    }
}

TEST_CASE("gamma: poles and negatives") {
    CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_fn(-3.0), std::domain_error);
    // Gamma(-0.5) = -2 sqrt(pi)
    CHECK(gamma_fn(-0.5) == doctest::Approx(-2.0 * std::sqrt(kPi)).epsilon(1e-12));
}

TEST_CASE("beta: values and consistency") {
    CHECK(beta_fn(0.5, 0.5) == doctest::Approx(kPi).epsilon(1e-13));
    CHECK(beta_fn(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
    // s = 0.5, N = 2: B(s + 1/2, (N-1)/2) = Gamma(1)Gamma(0.5)/Gamma(1.5) = 2
    CHECK(beta_fn(1.0, 0.5) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK_THROWS_AS(beta_fn(-1.0, 2.0), std::domain_error);
}

TEST_CASE("inc_beta: complete case equals beta for positive parameters") {
    for (double a : {0.3, 1.0, 2.5})
        for (double b : {0.4, 1.0, 3.25})
            CHECK(inc_beta(1.0, a, b) == doctest::Approx(beta_fn(a, b)).epsilon(1e-12));
}

TEST_CASE("inc_beta: arcsine closed form and uniform density") {
    // int_0^x u^{-1/2}(1-u)^{-1/2} du = 2 asin(sqrt(x))
    CHECK(inc_beta(0.5, 0.5, 0.5) == doctest::Approx(kPi / 2.0).epsilon(1e-12));
    CHECK(inc_beta(0.25, 0.5, 0.5) ==
          doctest::Approx(2.0 * std::asin(0.5)).epsilon(1e-12));
    CHECK(inc_beta(0.37, 1.0, 1.0) == doctest::Approx(0.37).epsilon(1e-13));
}

TEST_CASE("inc_beta: nonpositive b against direct quadrature") {
    auto oracle = [](double x, double a, double b) {
        auto f = [a, b](double u) {
            return std::pow(u, a - 1.0) * std::pow(1.0 - u, b - 1.0);
        };
        return quad::adaptive_gk(f, 0.0, x, 1e-13, 1e-13).value;
    };
    for (double b : {-0.25, -1.0, -2.25, 0.0}) {
        for (double x : {0.3, 0.9, 0.999, 0.999999}) {
            const double got = inc_beta(x, 1.5, b);
            CHECK(got == doctest::Approx(oracle(x, 1.5, b)).epsilon(1e-9));
        }
    }
    CHECK(std::isinf(inc_beta(1.0, 1.5, -0.5)));
    CHECK_THROWS_AS(inc_beta(1.2, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(inc_beta(0.5, -1.0, 1.0), std::domain_error);
}

TEST_CASE("sphere measure") {
    CHECK(sphere_measure(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(sphere_measure(2) == doctest::Approx(2.0 * kPi).epsilon(1e-14));
    CHECK(sphere_measure(3) == doctest::Approx(4.0 * kPi).epsilon(1e-14));
    CHECK_THROWS_AS(sphere_measure(0), std::domain_error);
}

TEST_CASE("planar moment: closed values") {
    CHECK(planar_moment(1, -1.0) == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(planar_moment(1, -1.5) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(planar_moment(2, -2.0) == doctest::Approx(kPi).epsilon(1e-12));
    CHECK_THROWS_AS(planar_moment(1, -0.5), std::domain_error);
    CHECK_THROWS_AS(planar_moment(0, -2.0), std::domain_error);
}

TEST_CASE("planar moment: quadrature oracle across M and tau") {
    for (int M : {1, 2, 3})
        for (double tau : {-1.0, -1.5, -2.5}) {
            if (!(tau < -0.5 * M)) continue;
            CHECK(planar_moment(M, tau) ==
                  doctest::Approx(planar_moment_oracle(M, tau)).epsilon(1e-8));
        }
}

TEST_CASE("constants: N=1 and N=2 reference values at s=1/2") {
    const Constants c1 = constants_for(FracOrder(1, 0.5));
    CHECK(c1.c_ns == doctest::Approx(1.0 / kPi).epsilon(1e-13));
    CHECK(c1.kappa_ns == doctest::Approx(1.0 / kPi).epsilon(1e-13));
    CHECK(c1.K_s_paper == doctest::Approx(2.0 / kPi).epsilon(1e-13));

    const Constants c2 = constants_for(FracOrder(2, 0.5));
    CHECK(c2.c_ns == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-13));
    CHECK(c2.kappa_ns == doctest::Approx(1.0 / (kPi * kPi)).epsilon(1e-13));
    CHECK(c2.K_s_paper == doctest::Approx(2.0 / (kPi * kPi)).epsilon(1e-13));
}

TEST_CASE("constants: the two boundary constants disagree at s=1/2") {
    for (int N : {1, 2, 3}) {
        const Constants c = constants_for(FracOrder(N, 0.5));
        CHECK(c.C_s_derived == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(c.C_s_paper == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("constants: C_s_derived is dimension independent") {
    for (double s : {0.25, 0.5, 0.75}) {
        const double ref = constants_for(FracOrder(2, s)).C_s_derived;
        for (int N : {3, 4}) {
            CHECK(constants_for(FracOrder(N, s)).C_s_derived ==
                  doctest::Approx(ref).epsilon(1e-10));
        }
    }
}

TEST_CASE("frac order validation") {
    CHECK_THROWS_AS(FracOrder(1, 1.5), std::domain_error);
    CHECK_THROWS_AS(FracOrder(0, 0.5), std::domain_error);
    CHECK(FracOrder(1, 0.5).log_case());
    CHECK_FALSE(FracOrder(1, 0.5).subcritical());
    CHECK(FracOrder(3, 0.75).subcritical());
    CHECK_THROWS_AS(FracOrder(1, 0.75).require_subcritical_or_log(),
                    std::domain_error);
}
