// Walk-on-spheres: deterministic counter streams, the radial exit law
// against its quadrature oracle, unit exit mass, the box-indicator estimate
// against the half-space kernel, reproducibility, and scale invariance.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fraclab/quadrature.hpp"
#include "fraclab/wos.hpp"

using namespace fraclab;
using namespace fraclab::wos;

namespace {

Point pt(std::initializer_list<double> c) { return Point(std::vector<double>(c)); }

} // namespace

TEST_CASE("counter rng: deterministic, stream-separated, uniform-ish") {
    CounterRng a(42, 7), b(42, 7), c(42, 8);
    double mean = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double ua = a.uniform();
        CHECK(ua == b.uniform());
        CHECK(ua > 0.0);
        CHECK(ua < 1.0);
        mean += ua;
    }
    mean /= 1000.0;
    CHECK(std::fabs(mean - 0.5) < 0.05);
    CHECK(a.uniform() != c.uniform());
}

TEST_CASE("radial exit law: cdf round trip and oracle") {
    for (double s : {0.25, 0.5, 0.75}) {
        const RadialJumpTable table(s);
        for (double q : {0.05, 0.3, 0.7, 0.99, 0.999999}) {
            const double rho = table.sample_rho(q);
            CHECK(rho > 1.0);
            CHECK(table.cdf(rho) == doctest::Approx(q).epsilon(1e-7));
        }
        // P(rho > 2) against direct quadrature of the radial density
        // (2 sin(pi s)/pi) (rho^2-1)^{-s} / rho
        auto density = [s](double rho) {
            return 2.0 * std::sin(M_PI * s) / M_PI *
                   std::pow(rho * rho - 1.0, -s) / rho;
        };
        auto tail = quad::adaptive_gk_left_singular(
            [&](double u) { return density(1.0 / u) / (u * u); }, 0.0, 0.5,
            2.0 * s - 1.0, 1e-11, 1e-11);
        CHECK(1.0 - table.cdf(2.0) == doctest::Approx(tail.value).epsilon(1e-7));
    }
}

TEST_CASE("ball jumps land outside the ball") {
    const FracOrder o(2, 0.5);
    const RadialJumpTable table(o.s);
    CounterRng rng(5, 0);
    for (int i = 0; i < 10000; ++i) {
        const Point jump = sample_ball_jump(o, 0.7, rng, table);
        CHECK(jump.norm() > 0.7);
    }
}

TEST_CASE("empirical jump law matches the quadrature tail probability") {
    const FracOrder o(2, 0.5);
    const RadialJumpTable table(o.s);
    CounterRng rng(11, 3);
    const long n = 100000;
    long beyond = 0;
    for (long i = 0; i < n; ++i)
        if (sample_ball_jump(o, 1.0, rng, table).norm() > 2.0) ++beyond;
    const double p_hat = static_cast<double>(beyond) / n;
    const double p = 1.0 - table.cdf(2.0);
    const double se = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::fabs(p_hat - p) < 3.0 * se);
}

TEST_CASE("unit exit mass and sane walk statistics") {
    const FracOrder o(2, 0.5);
    WalkConfig cfg;
    cfg.n_walks = 20000;
    cfg.seed = 123;
    cfg.norm_check = true;
    const WalkStats st = wos_estimate(o, pt({1.0, 0.0}),
                                      [](const Point&) { return 1.0; }, cfg);
    CHECK(st.capped_fraction < 1e-3);
    CHECK(st.estimate == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(st.unit_mass == doctest::Approx(st.estimate));
    CHECK(st.mean_steps > 1.0);
    CHECK(st.mean_steps < 50.0);
}

TEST_CASE("box-indicator estimate matches the half-space kernel quadrature") {
    const FracOrder o(2, 0.5);
    const Point x = pt({1.0, 0.0});
    auto g = [](const Point& p) {
        return (p[0] >= -2.0 && p[0] <= -1.0 && p[1] >= -1.0 && p[1] <= 1.0) ? 1.0
                                                                             : 0.0;
    };
    // quadrature of the kernel over the box
    auto inner = [&](double y1) {
        auto f = [&](double y2) {
            return kernels::poisson_halfspace(o, x, pt({y1, y2}),
                                              NormMode::probabilistic_kappa);
        };
        return quad::adaptive_gk(f, -1.0, 1.0, 1e-10, 1e-10).value;
    };
    const double target = quad::adaptive_gk(inner, -2.0, -1.0, 1e-9, 1e-9).value;

    WalkConfig cfg;
    cfg.n_walks = 100000;
    cfg.seed = 2026;
    const WalkStats st = wos_estimate(o, x, g, cfg);
    CHECK(std::fabs(st.estimate - target) < 3.0 * st.std_error);
}

TEST_CASE("bit-identical reruns and worker-count independence") {
    const FracOrder o(2, 0.5);
    auto g = [](const Point& p) { return p[0] < -0.5 ? 1.0 : 0.0; };
    WalkConfig cfg;
    cfg.n_walks = 5000;
    cfg.seed = 77;
    const WalkStats a = wos_estimate(o, pt({1.0, 0.2}), g, cfg);
    const WalkStats b = wos_estimate(o, pt({1.0, 0.2}), g, cfg);
    cfg.jobs = 4;
    const WalkStats c = wos_estimate(o, pt({1.0, 0.2}), g, cfg);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
    CHECK(a.estimate == c.estimate);
    CHECK(a.std_error == c.std_error);
}

TEST_CASE("dilation invariance: doubled geometry reproduces the estimate exactly") {
    // scaling by 2 is exact in floating point, the walk geometry is
    // positively homogeneous, and the indicator scales along: identical
    // draws land in the scaled box iff they landed in the original.
    const FracOrder o(2, 0.5);
    auto g1 = [](const Point& p) {
        return (p[0] >= -2.0 && p[0] <= -1.0 && std::fabs(p[1]) <= 1.0) ? 1.0 : 0.0;
    };
    auto g2 = [](const Point& p) {
        return (p[0] >= -4.0 && p[0] <= -2.0 && std::fabs(p[1]) <= 2.0) ? 1.0 : 0.0;
    };
    WalkConfig cfg;
    cfg.n_walks = 20000;
    cfg.seed = 31;
    const WalkStats a = wos_estimate(o, pt({1.0, 0.0}), g1, cfg);
    const WalkStats b = wos_estimate(o, pt({2.0, 0.0}), g2, cfg);
    CHECK(a.estimate == b.estimate);
}
