#include "fraclab/limits.hpp"

#include <cmath>
#include <functional>

#include "fraclab/quadrature.hpp"

namespace fraclab::limits {

RateFit rate_fit(const std::vector<double>& eps, const std::vector<double>& errors) {
    if (eps.size() != errors.size() || eps.size() < 3)
        throw std::invalid_argument("rate_fit: need at least 3 matching points");
    const int n = static_cast<int>(eps.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        if (!(eps[i] > 0.0) || !(errors[i] > 0.0))
            throw std::domain_error("rate_fit: eps and errors must be positive");
        const double x = std::log(eps[i]);
        const double y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    RateFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.slope * sx) / n;
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = std::log(errors[i]) - (intercept + fit.slope * std::log(eps[i]));
        ss += r * r;
    }
    if (n > 2) {
        const double sigma2 = ss / (n - 2);
        fit.half_width = 2.0 * std::sqrt(sigma2 * n / denom);
    }
    return fit;
}

namespace {

// Deterministic lattice over the box, n points per axis.
std::vector<Point> box_lattice(const Box& box, int n) {
    const int d = box.dim();
    if (n < 2) throw std::domain_error("convergence study: lattice needs >= 2 points");
    std::vector<Point> pts;
    const long total = static_cast<long>(std::pow(n, d));
    pts.reserve(total);
    for (long k = 0; k < total; ++k) {
        Point p = Point::zero(d);
        long rem = k;
        for (int i = 0; i < d; ++i) {
            const int j = rem % n;
            rem /= n;
            p.coords[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * j / (n - 1.0);
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

using FieldFn = std::function<double(const Point&)>;

// int_{R^N_+} |f(x)| (1+|x|)^{-N-2s} dx in polar form over the half space.
double l1s_distance(const FracOrder& order, const FieldFn& diff, double tol) {
    const int N = order.N;
    const double w_pow = N + 2.0 * order.s;
    auto radial = [&](double r) {
        double ang = 0.0;
        if (N == 1) {
            ang = std::fabs(diff(Point(std::vector<double>{r})));
        } else if (N == 2) {
            auto g = [&](double th) {
                return std::fabs(
                    diff(Point(std::vector<double>{r * std::cos(th), r * std::sin(th)})));
            };
            ang = quad::adaptive_gk(g, -M_PI / 2 + 1e-10, M_PI / 2 - 1e-10, tol, tol, 14)
                      .value;
        } else {
            throw std::domain_error("l1s_distance: N <= 2 at desk scale");
        }
        return ang * std::pow(r, N - 1.0) * std::pow(1.0 + r, -w_pow);
    };
    // the difference fields carry an integrable r^{s-N}-type origin layer
    auto res_head = quad::adaptive_gk_left_singular(radial, 0.0, 1.0,
                                                    order.s - 1.0,
                                                    tol, tol);
    auto res_mid = quad::adaptive_gk(radial, 1.0, 64.0, tol, tol);
    auto res_tail = quad::adaptive_gk_to_inf(radial, 64.0, tol, tol);
    return res_head.value + res_mid.value + res_tail.value;
}

ConvergenceStudy run_study(const FracOrder& order, const std::vector<double>& grid,
                           const Box& box,
                           const std::function<FieldFn(double)>& diff_at,
                           bool l1s_headline, const StudyOptions& opt) {
    if (box.dim() != order.N)
        throw std::invalid_argument("convergence study: box dimension mismatch");
    if (!(box.lo[0] > 0.0))
        throw std::domain_error("convergence study: box must be strictly interior");
    for (size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] < grid[i - 1]))
            throw std::domain_error("convergence study: grid must decrease");

    ConvergenceStudy st;
    st.eps_grid = grid;
    st.box = box;
    const auto lattice = box_lattice(box, opt.lattice_per_axis);
    for (double eps : grid) {
        FieldFn diff = diff_at(eps);
        std::vector<double> vals(lattice.size());
        quad::parallel_for(static_cast<long>(lattice.size()), opt.jobs,
                           [&](long i) { vals[i] = std::fabs(diff(lattice[i])); });
        double sup = 0.0;
        for (double v : vals) sup = std::max(sup, v); // fixed-order reduction
        st.sup_errors.push_back(sup);
        st.l1s_errors.push_back(l1s_distance(order, diff, 1e-8));
    }
    st.rate_sup = rate_fit(grid, st.sup_errors);
    st.rate_l1s = rate_fit(grid, st.l1s_errors);
    st.fitted_rate = l1s_headline ? st.rate_l1s : st.rate_sup;
    return st;
}

} // namespace

ConvergenceStudy green_limit_study(const FracOrder& order,
                                   const std::vector<double>& eps_grid,
                                   const Box& box, const StudyOptions& opt) {
    order.require_subcritical();
    // the proof's small-pole condition: the compact set must clear 2 eps
    for (double eps : eps_grid)
        if (2.0 * eps >= box.lo[0])
            throw std::domain_error("green_limit_study: eps too large for the box");

    auto diff_at = [&order](double eps) -> FieldFn {
        return [&order, eps](const Point& x) {
            const Point pole = Point::e1(x.dim(), eps);
            const double g =
                std::pow(eps, -order.s) * kernels::green_halfspace(order, x, pole);
            return g - kernels::fundamental_ps(order, x);
        };
    };
    ConvergenceStudy st = run_study(order, eps_grid, box, diff_at, /*l1s=*/true, opt);
    st.leading_constant = green_limit_leading_constant(order);
    return st;
}

ConvergenceStudy poisson_limit_study(const FracOrder& order,
                                     const std::vector<double>& eps_grid,
                                     const Box& box, const StudyOptions& opt) {
    order.require_subcritical();
    auto diff_at = [&order](double eps) -> FieldFn {
        return [&order, eps](const Point& x) {
            const Point pole = Point::e1(x.dim(), -eps);
            const double p =
                std::pow(eps, order.s) *
                kernels::poisson_halfspace(order, x, pole, NormMode::paper_K);
            return p - kernels::fundamental_ps(order, x);
        };
    };
    return run_study(order, eps_grid, box, diff_at, /*l1s=*/false, opt);
}

ConvergenceStudy boundary_layer_study(const FracOrder& order, Layer layer,
                                      const std::vector<double>& t_grid,
                                      const Box& box, const StudyOptions& opt) {
    if (!(order.s < 1.0))
        throw std::domain_error("boundary_layer_study: requires s inside (0,1)");
    const double C1 = kernels::layer_c1(order, NormMode::paper_K);
    // The mu-layer limit C1 x_1^{s-1} is attained as the layer approaches
    // the wall (depth = grid value -> 0).  The nu-layer superposition is
    // C1 x_1^s t/(x_1+t), so its limit C1 x_1^s is attained as the layer
    // RECEDES; the study maps the decreasing grid to depth 1/grid, and the
    // closed form gives the gap C1 x_1^{s+1}/(x_1+t), first order either way.
    auto diff_at = [&order, layer, C1](double g) -> FieldFn {
        const double t = layer == Layer::mu ? g : 1.0 / g;
        return [&order, layer, C1, t](const Point& x) {
            const auto mu = layer == Layer::mu ? BoundaryLayerMeasure::layer_mu(t)
                                               : BoundaryLayerMeasure::layer_nu(t);
            const double v =
                kernels::poisson_superposition(order, x, mu, NormMode::paper_K);
            const double lim =
                layer == Layer::mu
                    ? C1 * std::pow(x.x1(), order.s - 1.0)
                    : C1 * std::pow(x.x1(), order.s);
            return v - lim;
        };
    };
    return run_study(order, t_grid, box, diff_at, /*l1s=*/false, opt);
}

double green_limit_leading_constant(const FracOrder& order) {
    order.require_subcritical();
    // measured coefficient of eps^{-s} G(x, eps e_1) against x_1^s |x|^{-N}
    // at a reference point, Richardson-extrapolated in eps to kill the
    // first-order term.
    Point x = Point::zero(order.N);
    x.coords[0] = 1.0;
    if (order.N > 1) x.coords[1] = 0.5;
    const double profile = std::pow(x.x1(), order.s) *
                           std::pow(x.norm2(), -0.5 * order.N);
    auto coeff = [&](double eps) {
        const Point pole = Point::e1(order.N, eps);
        return std::pow(eps, -order.s) * kernels::green_halfspace(order, x, pole) /
               profile;
    };
    const double c1 = coeff(1e-6);
    const double c2 = coeff(5e-7);
    return 2.0 * c2 - c1;
}

} // namespace fraclab::limits
