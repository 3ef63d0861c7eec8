// Distributional-identity checks.  The R_s pairing vanishes and is
// normalization-free; the P_s and Q_s pairings are measured against the
// closed forms this laboratory itself pinned down:
//   int P_s (-Delta)^s phi dx = A_s d^s phi(0),  A_s = 2^{2s-1} Gamma(s)/Gamma(1-s)
//   int Q_s (-Delta)^s phi dx = s Gamma(s)^2 int d^s phi(0,x') dx'   (N = 1 here)
// A_s == 1 exactly at s = 1/2, where the nominal identity and the
// measurement coincide.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fraclab/identities.hpp"
#include "fraclab/special.hpp"

using namespace fraclab;
using namespace fraclab::identities;

namespace {

constexpr double kPi = 3.14159265358979323846;

TestFunction unit_bump(int N, double s, double radius = 1.0) {
    BumpSpec b;
    b.center = Point::zero(N);
    b.radius = radius;
    return make_test_function(FracOrder(N, s), b);
}

double a_factor(double s) {
    return std::pow(2.0, 2.0 * s - 1.0) * special::gamma_fn(s) /
           special::gamma_fn(1.0 - s);
}

} // namespace

TEST_CASE("test function construction and membership") {
    const TestFunction phi = unit_bump(1, 0.5);
    CHECK(phi.eval(Point::e1(1, -0.5)) == 0.0);
    CHECK(phi.psi(Point::zero(1)) == doctest::Approx(1.0));
    // rho^{-s} phi extends continuously: the quotient equals psi
    const Point p = Point::e1(1, 0.25);
    CHECK(phi.eval(p) / std::pow(0.25, 0.5) == doctest::Approx(phi.psi(p)));
    // support leaking left is rejected
    BumpSpec bad;
    bad.center = Point::e1(2, -0.5);
    bad.radius = 1.0;
    CHECK_THROWS_AS(make_test_function(FracOrder(2, 0.5), bad), std::domain_error);
    // the truncation surrogate stays finite
    CHECK(std::isfinite(verify_xs_surrogate(phi)));
}

TEST_CASE("fractional boundary derivative: analytic, extrapolated, scaling") {
    const TestFunction phi = unit_bump(1, 0.4);
    CHECK(frac_boundary_derivative(phi) == doctest::Approx(1.0));
    CHECK(frac_boundary_derivative_extrapolated(phi) ==
          doctest::Approx(frac_boundary_derivative(phi)).epsilon(1e-7));

    // linear in the amplitude
    BumpSpec twice;
    twice.center = Point::zero(1);
    twice.radius = 1.0;
    twice.amplitude = 2.0;
    const TestFunction phi2 = make_test_function(FracOrder(1, 0.4), twice);
    CHECK(frac_boundary_derivative(phi2) == doctest::Approx(2.0));

    // a bump whose support misses the origin has zero boundary derivative
    BumpSpec off;
    off.center = Point::e1(1, 3.0);
    off.radius = 1.0;
    const TestFunction phi_off = make_test_function(FracOrder(1, 0.4), off);
    CHECK(frac_boundary_derivative(phi_off) == 0.0);
}

TEST_CASE("R_s pairing vanishes (normalization-free identity)") {
    for (double s : {0.25, 0.5}) {
        const FracOrder o(1, s);
        const TestFunction phi = unit_bump(1, s);
        const IdentityReport rep = check_identity_rs(o, phi);
        CHECK(rep.rhs == 0.0);
        CHECK(std::fabs(rep.lhs) <= 0.01 * phi.sup_psi());
    }
}

TEST_CASE("R_s gap decreases under quadrature refinement") {
    const FracOrder o(1, 0.35);
    const TestFunction phi = unit_bump(1, 0.35);
    CheckBudget coarse;
    coarse.inner_settle_tol = 3e-4;
    coarse.outer_tol = 3e-4;
    CheckBudget fine;
    fine.inner_settle_tol = 1e-6;
    fine.outer_tol = 1e-6;
    const double g_coarse = check_identity_rs(o, phi, coarse).abs_gap;
    const double g_fine = check_identity_rs(o, phi, fine).abs_gap;
    CHECK(g_fine < g_coarse);
}

TEST_CASE("P_s pairing at s = 1/2: nominal identity holds (A_s = 1)") {
    const FracOrder o(1, 0.5);
    const TestFunction phi = unit_bump(1, 0.5);
    const IdentityReport rep = check_identity_ps(o, phi);
    CHECK(rep.rhs == doctest::Approx(1.0));
    CHECK(rep.rel_gap <= 0.01);
}

TEST_CASE("P_s pairing at s != 1/2: the measured constant is A_s") {
    for (double s : {0.25, 0.4}) {
        const FracOrder o(1, s);
        const TestFunction phi = unit_bump(1, s);
        const IdentityReport rep = check_identity_ps(o, phi);
        CHECK(rep.lhs / rep.rhs == doctest::Approx(a_factor(s)).epsilon(0.01));
    }
}

TEST_CASE("Q_s pairing: the measured constant is s Gamma(s)^2, not either C_s") {
    for (double s : {0.5, 0.25}) {
        const FracOrder o(1, s);
        const TestFunction phi = unit_bump(1, s);
        const IdentityReport rep = check_identity_qs(o, phi, CsMode::derived);
        const double slice = frac_boundary_derivative(phi);
        const double true_cs = s * std::pow(special::gamma_fn(s), 2.0);
        CHECK(rep.lhs / slice == doctest::Approx(true_cs).epsilon(0.01));
        // both nominal candidates sit far from the measurement
        const Constants c = special::constants_for(o);
        CHECK(std::fabs(rep.lhs / slice - c.C_s_derived) > 0.2 * true_cs);
        CHECK(std::fabs(rep.lhs / slice - c.C_s_paper) > 0.2 * true_cs);
        // the report against C_s_derived therefore shows a large gap
        CHECK(rep.rel_gap > 0.5);
    }
    // s = 1/2 cross-check of the closed form: s Gamma(s)^2 = pi/2
    CHECK(0.5 * kPi == doctest::Approx(0.5 * special::gamma_fn(0.5) *
                                       special::gamma_fn(0.5)));
}

TEST_CASE("identity linearity: doubling the bump doubles the pairing") {
    const FracOrder o(1, 0.5);
    const TestFunction phi = unit_bump(1, 0.5);
    BumpSpec twice;
    twice.center = Point::zero(1);
    twice.radius = 1.0;
    twice.amplitude = 2.0;
    const TestFunction phi2 = make_test_function(o, twice);
    const IdentityReport a = check_identity_ps(o, phi);
    const IdentityReport b = check_identity_ps(o, phi2);
    CHECK(b.lhs == doctest::Approx(2.0 * a.lhs).epsilon(1e-3));
    CHECK(b.rhs == doctest::Approx(2.0 * a.rhs).epsilon(1e-12));
}

TEST_CASE("cs_ratio_numeric: closed form, N-independence") {
    CHECK(cs_ratio_numeric(2, 0.5) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(cs_ratio_numeric(3, 0.5) == doctest::Approx(0.5).epsilon(1e-10));
    for (double s : {0.25, 0.5, 0.75}) {
        const double closed =
            2.0 * s * s * special::gamma_fn(s) * special::gamma_fn(s + 0.5) /
            std::sqrt(kPi);
        const double r2 = cs_ratio_numeric(2, s);
        CHECK(r2 == doctest::Approx(closed).epsilon(1e-6));
        CHECK(cs_ratio_numeric(3, s) == doctest::Approx(r2).epsilon(1e-8));
        CHECK(cs_ratio_numeric(4, s) == doctest::Approx(r2).epsilon(1e-8));
    }
    CHECK_THROWS_AS(cs_ratio_numeric(1, 0.5), std::domain_error);
}

TEST_CASE("polynomial bump kind: construction and bounded truncations") {
    BumpSpec b;
    b.kind = BumpSpec::Kind::poly3;
    b.center = Point::zero(1);
    b.radius = 1.0;
    const TestFunction phi = make_test_function(FracOrder(1, 0.5), b);
    CHECK(phi.psi(Point::zero(1)) == doctest::Approx(1.0));
    CHECK(phi.psi(Point::e1(1, 1.0)) == 0.0);
    CHECK(std::isfinite(verify_xs_surrogate(phi)));
    const IdentityReport rep = check_identity_rs(FracOrder(1, 0.5), phi);
    CHECK(std::fabs(rep.lhs) <= 0.01 * phi.sup_psi());
}

TEST_CASE("R_s pairing in the plane (expensive; run with -no-skip)" *
          doctest::skip(true)) {
    // Measured once with this budget: lhs = 6.7e-4 against the 1% bound,
    // 1.9e4 outer nodes, about three minutes of nested quadrature.
    const FracOrder o(2, 0.5);
    BumpSpec b;
    b.center = Point::zero(2);
    b.radius = 1.0;
    const TestFunction phi = make_test_function(o, b);
    CheckBudget budget;
    budget.inner_settle_tol = 1e-4;
    budget.outer_tol = 3e-4;
    const IdentityReport rep = check_identity_rs(o, phi, budget);
    CHECK(std::fabs(rep.lhs) <= 0.01 * phi.sup_psi());
}

TEST_CASE("identity checks hold their desk-scale precondition") {
    const FracOrder o(3, 0.5);
    BumpSpec b;
    b.center = Point::zero(3);
    b.radius = 1.0;
    const TestFunction phi = make_test_function(o, b);
    CHECK_THROWS_AS(check_identity_rs(o, phi), std::domain_error);
}
