/// @file harmonics.hpp
/// @brief Exact harmonic-polynomial machinery: the degree-m harmonic basis
///        as the rational nullspace of the Laplacian, spherical monomial
///        moments, the shift-expansion coefficients Z_j, the kappa_{i,j}
///        kernel ratios, and the exact finite-annulus value of the fractional
///        Laplacian on polynomials.

#ifndef FRACLAB_HARMONICS_HPP
#define FRACLAB_HARMONICS_HPP

#include <functional>
#include <map>
#include <vector>

#include "fraclab/kernels.hpp"
#include "fraclab/rational.hpp"
#include "fraclab/special.hpp"

namespace fraclab {

/// Exponent vector alpha; x^alpha = prod x_i^{alpha_i}.
struct MultiIndex {
    std::vector<int> exponents;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> e) : exponents(std::move(e)) {}
    int dim() const { return static_cast<int>(exponents.size()); }
    int degree() const;
    bool operator<(const MultiIndex& o) const { return exponents < o.exponents; }
    bool operator==(const MultiIndex& o) const { return exponents == o.exponents; }
};

/// Sparse polynomial over exact rationals.  Zero coefficients are never
/// stored.  Immutable once built, safely shareable.
class Polynomial {
  public:
    explicit Polynomial(int N) : N_(N) {}
    static Polynomial monomial(int N, const MultiIndex& alpha, const Rational& c = 1);
    static Polynomial coordinate(int N, int i); // x_{i+1}

    int dim() const { return N_; }
    const std::map<MultiIndex, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Degree of the highest term (-1 for the zero polynomial).
    int degree() const;
    /// True when all stored terms share one degree.
    bool homogeneous() const;

    void add_term(const MultiIndex& alpha, const Rational& c);

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial scaled(const Rational& c) const;

    double eval(const Point& x) const;
    Rational eval_rational(const std::vector<Rational>& x) const;

    /// Partial derivative in coordinate i (exact).
    Polynomial derivative(int i) const;
    /// Classical Laplacian (exact).
    Polynomial laplacian() const;

  private:
    int N_;
    std::map<MultiIndex, Rational> terms_;
};

namespace harmonics {

/// All multi-indices in N variables of total degree m, lexicographic.
std::vector<MultiIndex> monomials_of_degree(int N, int m);

/// dim H_m = C(m+N-1, m) - C(m+N-3, m-2) for m >= 2; C(m+N-1, m) otherwise.
long harmonic_dim(int N, int m);

/// Exact rational basis of the harmonic homogeneous polynomials of degree m:
/// the nullspace of Delta : P_m -> P_{m-2}.  Every element satisfies
/// Delta p = 0 identically in exact arithmetic.
std::vector<Polynomial> harmonic_basis(int N, int m);

/// The apolar pairing [P,Q]_m = D_P Q on homogeneous degree-m polynomials
/// (read-only documentation surface for the orthogonality characterization
/// of the harmonic subspace).
Rational apolar_pairing(const Polynomial& p, const Polynomial& q);

/// int_{S^{N-1}} z^alpha domega: zero when any exponent is odd, otherwise
/// 2 prod Gamma((alpha_i+1)/2) / Gamma((|alpha|+N)/2).
double sphere_moment(const MultiIndex& alpha);

/// The rational part of the moment: for all-even alpha,
/// sphere_moment(alpha) = moment_scale(N, j) * prod (alpha_i - 1)!!  with
/// j = |alpha|.  Returns 0 for odd alpha.
Rational sphere_moment_rational(const MultiIndex& alpha);
/// The common positive transcendental factor 2 pi^{N/2} / (2^{j/2} Gamma((j+N)/2)).
double moment_scale(int N, int j);

/// Shift-expansion coefficients: p(x+z) - p(x) = sum_j sum_{|beta|=j}
/// (D^beta p(x)/beta!) z^beta, and
///   Z_j(x) = sum_{|beta|=j} (D^beta p(x)/beta!) int_{S^{N-1}} z^beta domega.
/// Only even j >= 2 survive.  p must be homogeneous; p is classically
/// harmonic iff every Z_j vanishes identically.
std::map<int, double> zj_coefficients(const Polynomial& p, const Point& x);

/// Z_j(x) as an exact polynomial up to the positive factor moment_scale(N,j)
/// (which never affects vanishing).  Empty polynomial means Z_j == 0.
Polynomial zj_polynomial(const Polynomial& p, int j);

/// Exact spherical-average deficit |dB_r|^{-1} int_{dB_r} p(x+z) domega_r - p(x)
///   = sum_{j>=2} Z_j(x) r^j / omega_N.
/// Exactly 0.0 for harmonic p (the rational cores vanish before any floating
/// multiplication).
double spherical_average_deficit(const Polynomial& p, const Point& x, double r);

/// Radial kernels K(t) for the kappa-ratio study.
struct RadialKernel {
    enum class Family { frac, K1, K2, custom };
    Family family = Family::frac;
    double param = 0.5; // s for frac, zeta for K1/K2
    std::function<double(double)> eval; // for custom

    static RadialKernel frac(double s);
    static RadialKernel k1(double zeta);       // (1+t)^{-N-zeta}
    static RadialKernel k2(double zeta);       // t^{-N-zeta} e^{-t}
    static RadialKernel custom(std::function<double(double)> f);

    double operator()(double t, int N) const;
};

/// sigma_j(eps) = int_eps^{1/eps} K(t) t^{N-1+j} dt.  Closed form for the
/// fractional family (with the logarithmic branch at j = 2s); adaptive
/// quadrature otherwise.
double sigma_j(const RadialKernel& K, int N, int j, double eps);

/// kappa_{i,j}(eps) = sigma_j(eps) / sigma_i(eps), i, j >= 2.
double kappa_ratio(const RadialKernel& K, int N, int i, int j, double eps);

/// Exact finite-annulus value of the fractional Laplacian on a homogeneous
/// polynomial:  c_ns int_{eps<|z|<1/eps} (p(x) - p(x+z)) |z|^{-N-2s} dz
///   = -c_ns sum_{j>=2} Z_j(x) sigma_j(eps).
/// Exactly 0.0 on harmonic polynomials for every eps.
double annulus_frac_lap_poly(const FracOrder& order, const Polynomial& p,
                             const Point& x, double eps);

} // namespace harmonics
} // namespace fraclab

#endif
