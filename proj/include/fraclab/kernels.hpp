/// @file kernels.hpp
/// @brief Closed-form Green kernels, Poisson kernels, the half-space
///        fundamental solution, boundary-layer superpositions, and source
///        densities.
///
/// Geometry conventions: the half space is {x_1 > 0}, its complement closure
/// {x_1 <= 0}; e_1 = (1, 0, ..., 0).  Kernel singularities (coincident
/// points, |y| = r, the x_1 = 0 ray of the x_1^{s-1} profile) return a clean
/// +infinity rather than an overflowed expression; callers that must react
/// escalate on non-finite values.

#ifndef FRACLAB_KERNELS_HPP
#define FRACLAB_KERNELS_HPP

#include <functional>
#include <string>
#include <vector>

#include "fraclab/special.hpp"

namespace fraclab {

/// A point of R^N.  coords[0] is x_1, the distance coordinate to the
/// boundary hyperplane.
struct Point {
    std::vector<double> coords;

    Point() = default;
    explicit Point(std::vector<double> c) : coords(std::move(c)) {}
    static Point zero(int N) { return Point(std::vector<double>(N, 0.0)); }
    static Point e1(int N, double scale = 1.0) {
        Point p = zero(N);
        p.coords[0] = scale;
        return p;
    }

    int dim() const { return static_cast<int>(coords.size()); }
    double x1() const { return coords[0]; }
    double& operator[](int i) { return coords[i]; }
    double operator[](int i) const { return coords[i]; }

    double norm2() const {
        double s = 0.0;
        for (double c : coords) s += c * c;
        return s;
    }
    double norm() const;
    double dist(const Point& o) const;
};

Point operator+(const Point& a, const Point& b);
Point operator-(const Point& a, const Point& b);
Point operator*(double t, const Point& a);

/// Which prefactor a Poisson-type kernel carries.
///
/// probabilistic_kappa uses kappa_ns, under which the ball and half-space
/// kernels integrate to exactly 1 over their exterior domains.  paper_K uses
/// K_s = kappa_ns 2^{2s-1}/s (the fundamental-solution constant), under
/// which the same integrals equal 2^{2s-1}/s.  Both are exposed; tests
/// document both values.
enum class NormMode { paper_K, probabilistic_kappa };

double norm_prefactor(const Constants& c, NormMode mode);

/// The ball/half-space Green-kernel arguments, kept together because the
/// three share the symmetry and sign structure.
struct GreenGeometry {
    static double psi_ball(const Point& x, const Point& y);                 // unit ball
    static double psi_ball_r(const Point& x, const Point& y, double r);     // dilated
    static double psi_halfspace(const Point& x, const Point& y);           // 4 x1 y1 / |x-y|^2
};

namespace kernels {

/// Green function of the ball B_r.  Zero when x or y is outside B_r;
/// +infinity at x = y.  Requires N > 2s, except N = 1, s = 1/2 which takes
/// the logarithmic closed form.
double green_ball(const FracOrder& order, const Point& x, const Point& y, double r);

/// Green function of the half space {x_1 > 0}; zero when x_1 <= 0 or
/// y_1 <= 0, +infinity at x = y.  Requires N > 2s (or the 1D log case).
double green_halfspace(const FracOrder& order, const Point& x, const Point& y);

/// Ball Poisson kernel: prefactor ((r^2-|x|^2)/(|y|^2-r^2))^s |x-y|^{-N} for
/// |x| < r < |y|, zero otherwise, +infinity on |y| = r.
double poisson_ball(const FracOrder& order, const Point& x, const Point& y,
                    double r, NormMode mode);

/// Half-space Poisson kernel: prefactor (x_1/(-y_1))^s |x-y|^{-N} for
/// x_1 > 0 > y_1.  Returns 0 for x_1 <= 0; y_1 >= 0 is a domain error.
double poisson_halfspace(const FracOrder& order, const Point& x, const Point& y,
                         NormMode mode);

/// Ball solution with a shifted exterior Dirac pole: the ball Poisson kernel
/// of B_r(r e_1) evaluated at the pole -t e_1,
///   K_s ((2 r x_1 - |x|^2)/(2 t r + t^2))^s |x + t e_1|^{-N}
/// on B_r(r e_1), zero outside.  Nondecreasing in r at fixed (x, t) and
/// converging to the half-space pole solution as r grows.
double ball_pole_solution(const FracOrder& order, const Point& x, double t,
                          double r, NormMode mode);

/// Fundamental solution K_s |x|^{-N} x_1^s on {x_1 > 0}, zero on the closed
/// complement away from the origin, +infinity at the origin.
double fundamental_ps(const FracOrder& order, const Point& x);

enum class Profile { Q_s, R_s };

/// Boundary profiles: Q_s = x_1^{s-1} on {x_1 > 0} (0 elsewhere, +infinity
/// on the hyperplane itself), R_s = (x_1)_+^s everywhere.
double boundary_profile(const FracOrder& order, const Point& x, Profile which);

} // namespace kernels

/// Measures on the closed left half space driving Poisson superpositions.
///
///  - dirac_at(y0):      unit Dirac at y0 (y0_1 <= 0)
///  - layer_mu(t):       delta_{-t}(y_1) * t^s dy'      (depth-weighted layer)
///  - layer_nu(t):       delta_{-t}(y_1) * t^{1+s} dy'
///  - dirac_shifted(eps): the pole measure of the shifted-Dirac problem; its
///    superposition is the half-space kernel at the pole -eps e_1,
///    prefactor eps^{-s} x_1^s |x + eps e_1|^{-N}, the large-r limit of
///    ball_pole_solution.
struct BoundaryLayerMeasure {
    enum class Kind { dirac_at, layer_mu, layer_nu, dirac_shifted };
    Kind kind = Kind::layer_mu;
    double t = 1.0;   // layer depth or pole distance; > 0
    Point point;      // for dirac_at

    static BoundaryLayerMeasure dirac_at(Point y0);
    static BoundaryLayerMeasure layer_mu(double t);
    static BoundaryLayerMeasure layer_nu(double t);
    static BoundaryLayerMeasure dirac_shifted(double eps);
};

/// Nonnegative source density on the half space, with a label.
struct SourceDensity {
    std::function<double(const Point&)> evaluator;
    std::string description;
};

namespace kernels {

/// Poisson superposition of a boundary-layer measure, closed forms:
///   layer_mu(t):        C1 x_1^s (x_1+t)^{-1},   C1 = prefactor * pm(N-1, -N/2)
///   layer_nu(t):        C1 x_1^s t (x_1+t)^{-1}
///   dirac_shifted(eps): prefactor eps^{-s} x_1^s |x + eps e_1|^{-N}
///   dirac_at(y0):       the half-space kernel at y0
/// where pm is the planar moment and pm(0, .) = 1 covers N = 1.
double poisson_superposition(const FracOrder& order, const Point& x,
                             const BoundaryLayerMeasure& mu, NormMode mode);

/// Same superposition by direct quadrature over the measure support
/// (tensorized over y' with algebraic tail mapping); the cross-check oracle
/// for the closed forms.  Dirac kinds reduce to kernel evaluations.
double poisson_superposition_quadrature(const FracOrder& order, const Point& x,
                                        const BoundaryLayerMeasure& mu, NormMode mode,
                                        double tol = 1e-10);

/// Source density induced by a measure:
///   dirac_shifted(eps): Gamma_eps(x) = c_ns |x + eps e_1|^{-N-2s}
///   dirac_at(y0):       c_ns |x - y0|^{-N-2s}
///   layer_mu(t):        C2 t^s (x_1+t)^{-(1+2s)},  C2 = c_ns * pm(N-1, -(N+2s)/2)
///   layer_nu(t):        C2 t^{1+s} (x_1+t)^{-(1+2s)}
/// (the layer exponent -(1+2s) comes out of the y'-scaling and is pinned by
/// the direct quadrature oracle in the tests)
SourceDensity source_density(const FracOrder& order, const BoundaryLayerMeasure& mu);

/// Quadrature oracle for the layer source densities.
double source_density_quadrature(const FracOrder& order, const Point& x,
                                 const BoundaryLayerMeasure& mu, double tol = 1e-10);

/// The boundary-layer constant C1 = prefactor * pm(N-1, -N/2) and
/// C2 = c_ns * pm(N-1, -(N+2s)/2) (pm(0,.) = 1).
double layer_c1(const FracOrder& order, NormMode mode);
double layer_c2(const FracOrder& order);

} // namespace kernels
} // namespace fraclab

#endif
