#include "fraclab/kernels.hpp"

#include <cmath>
#include <limits>

#include "fraclab/quadrature.hpp"

namespace fraclab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double Point::norm() const { return std::sqrt(norm2()); }

double Point::dist(const Point& o) const {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) {
        const double d = coords[i] - o.coords[i];
        s += d * d;
    }
    return std::sqrt(s);
}

Point operator+(const Point& a, const Point& b) {
    Point r = a;
    for (int i = 0; i < r.dim(); ++i) r.coords[i] += b.coords[i];
    return r;
}

Point operator-(const Point& a, const Point& b) {
    Point r = a;
    for (int i = 0; i < r.dim(); ++i) r.coords[i] -= b.coords[i];
    return r;
}

Point operator*(double t, const Point& a) {
    Point r = a;
    for (double& c : r.coords) c *= t;
    return r;
}

double norm_prefactor(const Constants& c, NormMode mode) {
    return mode == NormMode::paper_K ? c.K_s_paper : c.kappa_ns;
}

double GreenGeometry::psi_ball(const Point& x, const Point& y) {
    const double d2 = (x - y).norm2();
    return (1.0 - x.norm2()) * (1.0 - y.norm2()) / d2;
}

double GreenGeometry::psi_ball_r(const Point& x, const Point& y, double r) {
    const double d2 = (x - y).norm2();
    return (r * r - x.norm2()) * (r * r - y.norm2()) / (r * r * d2);
}

double GreenGeometry::psi_halfspace(const Point& x, const Point& y) {
    const double d2 = (x - y).norm2();
    return 4.0 * x.x1() * y.x1() / d2;
}

BoundaryLayerMeasure BoundaryLayerMeasure::dirac_at(Point y0) {
    if (y0.x1() > 0.0)
        throw std::domain_error("BoundaryLayerMeasure: Dirac point must have y_1 <= 0");
    BoundaryLayerMeasure m;
    m.kind = Kind::dirac_at;
    m.point = std::move(y0);
    return m;
}

namespace {
BoundaryLayerMeasure make_layer(BoundaryLayerMeasure::Kind k, double t) {
    if (!(t > 0.0)) throw std::domain_error("BoundaryLayerMeasure: depth must be > 0");
    BoundaryLayerMeasure m;
    m.kind = k;
    m.t = t;
    return m;
}
} // namespace

BoundaryLayerMeasure BoundaryLayerMeasure::layer_mu(double t) {
    return make_layer(Kind::layer_mu, t);
}
BoundaryLayerMeasure BoundaryLayerMeasure::layer_nu(double t) {
    return make_layer(Kind::layer_nu, t);
}
BoundaryLayerMeasure BoundaryLayerMeasure::dirac_shifted(double eps) {
    return make_layer(Kind::dirac_shifted, eps);
}

namespace kernels {

namespace {

// (kappa/2) |x-y|^{2s-N} int_0^psi z^{s-1} (1+z)^{-N/2} dz, evaluated through
// the incomplete Beta after u = z/(1+z):
//   int_0^psi = inc_beta(psi/(1+psi); s, N/2 - s).
double green_from_psi(const FracOrder& order, double psi, double dist) {
    if (psi <= 0.0) return 0.0;
    if (dist == 0.0) return kInf;
    const Constants c = special::constants_for(order);
    const double u = psi / (1.0 + psi);
    const double tail = special::inc_beta(u, order.s, 0.5 * order.N - order.s);
    return 0.5 * c.kappa_ns * std::pow(dist, 2.0 * order.s - order.N) * tail;
}

// N = 1, s = 1/2 closed form: int_0^psi z^{-1/2}(1+z)^{-1/2} dz
//   = 2 ln(sqrt(psi) + sqrt(1+psi)),
// so the unit-ball kernel is (1/pi) ln[(1 - xy + sqrt((1-x^2)(1-y^2)))/|x-y|].
double green_log_from_psi(double psi, double /*dist*/) {
    if (psi <= 0.0) return 0.0;
    const double sp = std::sqrt(psi);
    return (1.0 / M_PI) * std::log(sp + std::sqrt(1.0 + psi));
}

} // namespace

double green_ball(const FracOrder& order, const Point& x, const Point& y, double r) {
    order.require_subcritical_or_log();
    if (!(r > 0.0)) throw std::domain_error("green_ball: radius must be positive");
    if (x.norm2() >= r * r || y.norm2() >= r * r) return 0.0;
    const double dist = x.dist(y);
    if (dist == 0.0) return kInf;
    const double psi = GreenGeometry::psi_ball_r(x, y, r);
    if (order.log_case()) return green_log_from_psi(psi, dist);
    return green_from_psi(order, psi, dist);
}

double green_halfspace(const FracOrder& order, const Point& x, const Point& y) {
    order.require_subcritical_or_log();
    if (x.x1() <= 0.0 || y.x1() <= 0.0) return 0.0;
    const double dist = x.dist(y);
    if (dist == 0.0) return kInf;
    const double psi = GreenGeometry::psi_halfspace(x, y);
    if (order.log_case()) return green_log_from_psi(psi, dist);
    return green_from_psi(order, psi, dist);
}

double poisson_ball(const FracOrder& order, const Point& x, const Point& y,
                    double r, NormMode mode) {
    if (!(order.s < 1.0))
        throw std::domain_error("requires s strictly inside (0,1)");
    if (!(r > 0.0)) throw std::domain_error("poisson_ball: radius must be positive");
    const double x2 = x.norm2(), y2 = y.norm2(), r2 = r * r;
    if (y2 == r2) return kInf;
    if (x2 >= r2 || y2 < r2) return 0.0;
    const Constants c = special::constants_for(order);
    const double ratio = (r2 - x2) / (y2 - r2);
    return norm_prefactor(c, mode) * std::pow(ratio, order.s) *
           std::pow(x.dist(y), -static_cast<double>(order.N));
}

double poisson_halfspace(const FracOrder& order, const Point& x, const Point& y,
                         NormMode mode) {
    if (!(order.s < 1.0))
        throw std::domain_error("requires s strictly inside (0,1)");
    if (y.x1() >= 0.0)
        throw std::domain_error("poisson_halfspace: requires y_1 < 0");
    if (x.x1() <= 0.0) return 0.0;
    const Constants c = special::constants_for(order);
    return norm_prefactor(c, mode) * std::pow(x.x1() / (-y.x1()), order.s) *
           std::pow(x.dist(y), -static_cast<double>(order.N));
}

double ball_pole_solution(const FracOrder& order, const Point& x, double t,
                          double r, NormMode mode) {
    if (!(order.s < 1.0))
        throw std::domain_error("requires s strictly inside (0,1)");
    if (!(t > 0.0) || !(r > 0.0))
        throw std::domain_error("ball_pole_solution: requires t > 0 and r > 0");
    const double num = 2.0 * r * x.x1() - x.norm2();
    if (num <= 0.0) return 0.0; // outside B_r(r e_1)
    const Constants c = special::constants_for(order);
    const double arg = num / (2.0 * t * r + t * t);
    const Point pole = Point::e1(x.dim(), -t);
    return norm_prefactor(c, mode) * std::pow(arg, order.s) *
           std::pow(x.dist(pole), -static_cast<double>(order.N));
}

double fundamental_ps(const FracOrder& order, const Point& x) {
    if (!(order.s < 1.0))
        throw std::domain_error("requires s strictly inside (0,1)");
    const double n2 = x.norm2();
    if (n2 == 0.0) return kInf;
    if (x.x1() <= 0.0) return 0.0;
    const Constants c = special::constants_for(order);
    return c.K_s_paper * std::pow(n2, -0.5 * order.N) * std::pow(x.x1(), order.s);
}

double boundary_profile(const FracOrder& order, const Point& x, Profile which) {
    const double x1 = x.x1();
    if (which == Profile::R_s) return x1 > 0.0 ? std::pow(x1, order.s) : 0.0;
    if (x1 > 0.0) return std::pow(x1, order.s - 1.0);
    return x1 == 0.0 ? kInf : 0.0;
}

namespace {

// pm(N-1, tau) with the R^0 convention pm(0, .) = 1 (point measure).
double pm_reduced(int N, double tau) {
    return N == 1 ? 1.0 : special::planar_moment(N - 1, tau);
}

} // namespace

double layer_c1(const FracOrder& order, NormMode mode) {
    if (!(order.s < 1.0))
        throw std::domain_error("requires s strictly inside (0,1)");
    const Constants c = special::constants_for(order);
    return norm_prefactor(c, mode) * pm_reduced(order.N, -0.5 * order.N);
}

double layer_c2(const FracOrder& order) {
    if (!(order.s < 1.0))
        throw std::domain_error("requires s strictly inside (0,1)");
    const Constants c = special::constants_for(order);
    return c.c_ns * pm_reduced(order.N, -0.5 * (order.N + 2.0 * order.s));
}

double poisson_superposition(const FracOrder& order, const Point& x,
                             const BoundaryLayerMeasure& mu, NormMode mode) {
    if (!(order.s < 1.0))
        throw std::domain_error("requires s strictly inside (0,1)");
    if (!(x.x1() > 0.0))
        throw std::domain_error("poisson_superposition: requires x_1 > 0");
    const double s = order.s;
    switch (mu.kind) {
        case BoundaryLayerMeasure::Kind::dirac_at:
            return poisson_halfspace(order, x, mu.point, mode);
        case BoundaryLayerMeasure::Kind::layer_mu:
            return layer_c1(order, mode) * std::pow(x.x1(), s) / (x.x1() + mu.t);
        case BoundaryLayerMeasure::Kind::layer_nu:
            return layer_c1(order, mode) * std::pow(x.x1(), s) * mu.t / (x.x1() + mu.t);
        case BoundaryLayerMeasure::Kind::dirac_shifted: {
            const Constants c = special::constants_for(order);
            const Point pole = Point::e1(x.dim(), -mu.t);
            return norm_prefactor(c, mode) * std::pow(mu.t, -s) * std::pow(x.x1(), s) *
                   std::pow(x.dist(pole), -static_cast<double>(order.N));
        }
    }
    throw std::logic_error("poisson_superposition: unknown measure kind");
}

namespace {

// Integral over y' in R^{N-1} of f(|x' - y'|), reduced to a radial integral
// with algebraic tail mapping.  Handles N from 1 (empty integral -> f(0)).
double radial_layer_integral(int N, const std::function<double(double)>& f_of_rho,
                             double tol) {
    if (N == 1) return f_of_rho(0.0);
    const int M = N - 1;
    const double omega = special::sphere_measure(M); // |S^{M-1}|, = 2 for M = 1
    auto integrand = [&](double rho) {
        return f_of_rho(rho) * std::pow(rho, M - 1.0);
    };
    auto res = quad::adaptive_gk_to_inf(integrand, 0.0, tol, tol);
    return omega * res.value;
}

} // namespace

double poisson_superposition_quadrature(const FracOrder& order, const Point& x,
                                        const BoundaryLayerMeasure& mu, NormMode mode,
                                        double tol) {
    if (!(order.s < 1.0))
        throw std::domain_error("requires s strictly inside (0,1)");
    const int N = order.N;
    const double s = order.s;
    const Constants c = special::constants_for(order);
    const double pref = norm_prefactor(c, mode);
    switch (mu.kind) {
        case BoundaryLayerMeasure::Kind::dirac_at:
            return poisson_halfspace(order, x, mu.point, mode);
        case BoundaryLayerMeasure::Kind::dirac_shifted:
            return poisson_superposition(order, x, mu, mode);
        case BoundaryLayerMeasure::Kind::layer_mu:
        case BoundaryLayerMeasure::Kind::layer_nu: {
            const double t = mu.t;
            const double weight =
                mu.kind == BoundaryLayerMeasure::Kind::layer_mu ? std::pow(t, s)
                                                                : std::pow(t, 1.0 + s);
            const double a = x.x1() + t; // vertical gap to the layer plane
            auto f = [&](double rho) {
                const double dist2 = a * a + rho * rho;
                return std::pow(x.x1() / t, s) * std::pow(dist2, -0.5 * N);
            };
            return pref * weight * radial_layer_integral(N, f, tol);
        }
    }
    throw std::logic_error("poisson_superposition_quadrature: unknown measure kind");
}

SourceDensity source_density(const FracOrder& order, const BoundaryLayerMeasure& mu) {
    if (!(order.s < 1.0))
        throw std::domain_error("requires s strictly inside (0,1)");
    const Constants c = special::constants_for(order);
    const double s = order.s;
    const double N = order.N;
    SourceDensity out;
    switch (mu.kind) {
        case BoundaryLayerMeasure::Kind::dirac_at: {
            const Point y0 = mu.point;
            const double cns = c.c_ns;
            out.evaluator = [y0, cns, N, s](const Point& x) {
                return cns * std::pow(x.dist(y0), -(N + 2.0 * s));
            };
            out.description = "Gamma[dirac]";
            return out;
        }
        case BoundaryLayerMeasure::Kind::dirac_shifted: {
            const double eps = mu.t;
            const double cns = c.c_ns;
            out.evaluator = [eps, cns, N, s](const Point& x) {
                const Point pole = Point::e1(x.dim(), -eps);
                return cns * std::pow(x.dist(pole), -(N + 2.0 * s));
            };
            out.description = "Gamma_eps(eps=" + std::to_string(eps) + ")";
            return out;
        }
        case BoundaryLayerMeasure::Kind::layer_mu:
        case BoundaryLayerMeasure::Kind::layer_nu: {
            const double t = mu.t;
            const double C2 = layer_c2(order);
            const double tw = mu.kind == BoundaryLayerMeasure::Kind::layer_mu
                                  ? std::pow(t, s)
                                  : std::pow(t, 1.0 + s);
            // scaling of the y'-integral gives (x_1+t)^{(N-1)-(N+2s)}; the
            // quadrature oracle pins the exponent at -(1+2s)
            out.evaluator = [C2, tw, t, s](const Point& x) {
                return C2 * tw * std::pow(x.x1() + t, -(1.0 + 2.0 * s));
            };
            out.description = mu.kind == BoundaryLayerMeasure::Kind::layer_mu
                                  ? "Gamma[mu_t](t=" + std::to_string(t) + ")"
                                  : "Gamma[nu_t](t=" + std::to_string(t) + ")";
            return out;
        }
    }
    throw std::logic_error("source_density: unknown measure kind");
}

double source_density_quadrature(const FracOrder& order, const Point& x,
                                 const BoundaryLayerMeasure& mu, double tol) {
    if (!(order.s < 1.0))
        throw std::domain_error("requires s strictly inside (0,1)");
    const Constants c = special::constants_for(order);
    const int N = order.N;
    const double s = order.s;
    switch (mu.kind) {
        case BoundaryLayerMeasure::Kind::dirac_at:
        case BoundaryLayerMeasure::Kind::dirac_shifted:
            return source_density(order, mu).evaluator(x);
        case BoundaryLayerMeasure::Kind::layer_mu:
        case BoundaryLayerMeasure::Kind::layer_nu: {
            const double t = mu.t;
            const double weight =
                mu.kind == BoundaryLayerMeasure::Kind::layer_mu ? std::pow(t, s)
                                                                : std::pow(t, 1.0 + s);
            const double a = x.x1() + t;
            auto f = [&](double rho) {
                return std::pow(a * a + rho * rho, -0.5 * (N + 2.0 * s));
            };
            return c.c_ns * weight * radial_layer_integral(N, f, tol);
        }
    }
    throw std::logic_error("source_density_quadrature: unknown measure kind");
}

} // namespace kernels
} // namespace fraclab
