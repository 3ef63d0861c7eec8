// Convergence studies: rate fitting, the small-pole Green limit with its
// constant pinning, the Poisson-kernel limit, and the boundary layers.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fraclab/limits.hpp"

using namespace fraclab;
using namespace fraclab::limits;

namespace {

Box box2() {
    Box b;
    b.lo = {0.5, -1.0};
    b.hi = {2.0, 1.0};
    return b;
}

} // namespace

TEST_CASE("rate_fit: exact log-linear data") {
    const std::vector<double> eps{1e-1, 1e-2, 1e-3};
    CHECK(rate_fit(eps, {1e-1, 1e-2, 1e-3}).slope == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<double> half;
    for (double e : eps) half.push_back(std::sqrt(e));
    const RateFit f = rate_fit(eps, half);
    CHECK(f.slope == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f.half_width < 1e-10);
}

TEST_CASE("rate_fit: noise widens the confidence band, bad input throws") {
    const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4};
    const std::vector<double> noisy{1.1e-1, 0.8e-2, 1.3e-3, 0.9e-4};
    CHECK(rate_fit(eps, noisy).half_width > 0.0);
    CHECK_THROWS_AS(rate_fit({1e-1, 1e-2}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(rate_fit(eps, {1.0, -1.0, 1.0, 1.0}), std::domain_error);
}

TEST_CASE("green limit: weighted-L1 rate s, sup errors decreasing, constant K_s") {
    const FracOrder o(2, 0.5);
    const std::vector<double> grid{1e-1, 1e-2, 1e-3};
    const ConvergenceStudy st = green_limit_study(o, grid, box2());
    CHECK(st.fitted_rate.slope == doctest::Approx(o.s).epsilon(0.3));
    for (size_t i = 1; i < st.sup_errors.size(); ++i)
        CHECK(st.sup_errors[i] < st.sup_errors[i - 1]);
    for (size_t i = 1; i < st.l1s_errors.size(); ++i)
        CHECK(st.l1s_errors[i] < st.l1s_errors[i - 1]);
    const Constants c = special::constants_for(o);
    CHECK(st.leading_constant == doctest::Approx(c.K_s_paper).epsilon(1e-6));
}

TEST_CASE("green limit: eps clearing condition") {
    const FracOrder o(2, 0.5);
    CHECK_THROWS_AS(green_limit_study(o, {0.3, 0.1}, box2()), std::domain_error);
}

TEST_CASE("poisson limit: first order on compacts") {
    const FracOrder o(2, 0.5);
    const std::vector<double> grid{1e-1, 1e-2, 1e-3, 1e-4};
    const ConvergenceStudy st = poisson_limit_study(o, grid, box2());
    CHECK(st.fitted_rate.slope == doctest::Approx(1.0).epsilon(0.1));
    // at eps = 1e-3 the sup error sits far below the kernel scale on the box
    const double scale = kernels::fundamental_ps(o, Point(std::vector<double>{0.5, 0.0}));
    CHECK(st.sup_errors[2] < 1e-2 * scale);
}

TEST_CASE("boundary layers: rate 1 on compacts and exact closed-form error") {
    const FracOrder o(2, 0.5);
    const std::vector<double> grid{1e-1, 1e-2, 1e-3, 1e-4};
    for (Layer layer : {Layer::mu, Layer::nu}) {
        const ConvergenceStudy st = boundary_layer_study(o, layer, grid, box2());
        CHECK(st.fitted_rate.slope == doctest::Approx(1.0).epsilon(0.05));
    }
    // weighted-L1 errors decrease along the grid as well
    const ConvergenceStudy mu_st = boundary_layer_study(o, Layer::mu, grid, box2());
    for (size_t i = 1; i < mu_st.l1s_errors.size(); ++i)
        CHECK(mu_st.l1s_errors[i] < mu_st.l1s_errors[i - 1]);

    // mu-layer error at x = e_1 is C1 (1/(1+t) - 1) exactly
    const double C1 = kernels::layer_c1(o, NormMode::paper_K);
    const double t = 0.25;
    const double v = kernels::poisson_superposition(
        o, Point::e1(2, 1.0), BoundaryLayerMeasure::layer_mu(t), NormMode::paper_K);
    CHECK(v - C1 == doctest::Approx(C1 * (1.0 / (1.0 + t) - 1.0)).epsilon(1e-12));
}

TEST_CASE("one-dimensional study also runs") {
    const FracOrder o(1, 0.25);
    Box b;
    b.lo = {0.5};
    b.hi = {2.0};
    const ConvergenceStudy st = green_limit_study(o, {1e-1, 1e-2, 1e-3}, b);
    CHECK(st.fitted_rate.slope == doctest::Approx(o.s).epsilon(0.3));
}
