/// @file pvlap.hpp
/// @brief Principal-value evaluation of the fractional Laplacian on the
///        annulus family B_{1/eps} \ B_eps, with antipodally paired angular
///        rules, Cauchy settling in eps, and singularity-aware quadrature.

#ifndef FRACLAB_PVLAP_HPP
#define FRACLAB_PVLAP_HPP

#include <functional>
#include <string>

#include "fraclab/harmonics.hpp"
#include "fraclab/kernels.hpp"
#include "fraclab/special.hpp"

namespace fraclab {

/// An evaluatable field on R^N with the metadata the quadrature needs:
/// declared growth class and the location of any singular set.
struct ScalarField {
    enum class Growth { bounded, power, weighted_l1s };
    enum class SingularKind { none, plane_x1, point };

    std::function<double(const Point&)> eval;
    int N = 1;
    Growth growth = Growth::bounded;
    double growth_power = 0.0;          // for Growth::power: |u| <= C(1+|x|)^p
    SingularKind singular = SingularKind::none;
    double plane_offset = 0.0;          // singular plane {x_1 = plane_offset}
    Point singular_point;               // for SingularKind::point
    double osc_scale = 0.0;             // characteristic wavenumber, 0 = none
    double feature_radius = 2.0;        // radius around the origin holding the
                                        // field's compact features; settling is
                                        // blocked until the annulus covers it
    std::string label;

    /// C^2 regularity predicate at a query point; defaults to "off the
    /// singular set".
    bool smooth_at(const Point& x) const;

    static ScalarField function(int N, std::function<double(const Point&)> f,
                                Growth g = Growth::bounded, double p = 0.0);
};

/// Ready-made fields used across the verification suites.
namespace fields {

ScalarField cosine(int N, const Point& xi);            // cos(xi . x)
ScalarField linear(int N, const Point& coef);          // coef . x
ScalarField abs_squared(int N);                        // |x|^2
ScalarField polynomial(const Polynomial& p);           // exact-poly wrapper
ScalarField fundamental(const FracOrder& order);       // K_s |x|^{-N} x_1^s, 0 left
ScalarField profile_q(const FracOrder& order);         // x_1^{s-1} on the right
ScalarField profile_r(const FracOrder& order);         // (x_1)_+^s
/// (x_1)_+^pow * h(x'), plane-singular at x_1 = 0.
ScalarField separable(const FracOrder& order, double pow, const Polynomial& h);

} // namespace fields

/// Annulus cutoffs and node rules.  The outer radius is tied to 1/eps when
/// R_outer <= 0 (the default annulus family); otherwise it starts at R_outer
/// and doubles alongside the refinement.  antipodal must stay true: the
/// principal-value semantics relies on exact odd cancellation.
struct QuadratureSpec {
    double eps_inner = 0.25;   // starting eps_0 of the family eps_k = 2^{-k} eps_0
    double R_outer = 0.0;      // <= 0: tied to 1/eps_k
    int radial_order = 12;     // Gauss order per radial shell (smooth path)
    int angular_order = 48;    // circle nodes (N=2) / theta nodes (N=3)
    bool antipodal = true;
    double settle_tol = 1e-4;  // Cauchy target: |V_k - V_{k-1}| <= tol (1 + |V_k|)
    int max_levels = 72;

    void validate() const;
};

/// value + error estimate + divergence flag + evaluation budget.
/// When diverging is set, value carries the last finite-annulus value,
/// never an extrapolation.
struct EvalResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool diverging = false;
    long budget = 0;
};

namespace pvlap {

/// c_ns int_{O_eps} (u(x) - u(x+z)) |z|^{-N-2s} dz on the shrinking annulus
/// family, with Richardson-style settling.  Odd components cancel through
/// the antipodal pairing of every rule.
EvalResult pv_frac_lap(const FracOrder& order, const ScalarField& u,
                       const Point& x, const QuadratureSpec& spec);

/// (c_ns/2) int (2u(x) - u(x+z) - u(x-z)) |z|^{-N-2s} dz over the same
/// family; requires u C^2 at x.  Agrees with pv_frac_lap wherever both
/// converge (the paired pv rule evaluates the same sums).
EvalResult symmetrized_frac_lap(const FracOrder& order, const ScalarField& u,
                                const Point& x, const QuadratureSpec& spec);

/// 1D profile factor for separable fields u(x) = u1d(x_1) h(x').
struct Profile1D {
    std::function<double(double)> eval;
    bool singular_at_zero = true;   // power-type singularity/kink at x_1 = 0
    double sing_exponent = 0.0;     // local behavior (x_1)_+^sing_exponent

    static Profile1D power_plus(double p); // (x_1)_+^p
};

/// Iterated principal value for separable fields: the x_1-marginal PV
/// integral weighted by the (N-1)-dimensional kernel mass, plus the
/// K_{z_1}-weighted spherical-cancellation term of the x'-factor (computed
/// through the exact moment machinery; identically zero for harmonic h).
EvalResult separable_frac_lap(const FracOrder& order, const Profile1D& u1d,
                              const Polynomial& h, const Point& x,
                              const QuadratureSpec& spec);

/// Weighted norm int |u(x)| / (1 + |x|^{N+2s}) dx with algebraic tail
/// mapping; the divergence flag trips when the ball truncations fail to
/// settle.
EvalResult weighted_l1s_norm(const FracOrder& order, const ScalarField& u,
                             double tol = 1e-8);

} // namespace pvlap
} // namespace fraclab

#endif
