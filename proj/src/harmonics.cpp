#include "fraclab/harmonics.hpp"

#include <cmath>

#include "fraclab/quadrature.hpp"

namespace fraclab {

int MultiIndex::degree() const {
    int d = 0;
    for (int e : exponents) d += e;
    return d;
}

Polynomial Polynomial::monomial(int N, const MultiIndex& alpha, const Rational& c) {
    Polynomial p(N);
    p.add_term(alpha, c);
    return p;
}

Polynomial Polynomial::coordinate(int N, int i) {
    MultiIndex a(std::vector<int>(N, 0));
    a.exponents[i] = 1;
    return monomial(N, a);
}

int Polynomial::degree() const {
    int d = -1;
    for (const auto& [a, c] : terms_) d = std::max(d, a.degree());
    return d;
}

bool Polynomial::homogeneous() const {
    int d = -1;
    for (const auto& [a, c] : terms_) {
        if (d < 0) d = a.degree();
        else if (a.degree() != d) return false;
    }
    return true;
}

void Polynomial::add_term(const MultiIndex& alpha, const Rational& c) {
    if (alpha.dim() != N_)
        throw std::invalid_argument("Polynomial: multi-index dimension mismatch");
    if (c.is_zero()) return;
    auto it = terms_.find(alpha);
    if (it == terms_.end()) {
        terms_.emplace(alpha, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial r = *this;
    for (const auto& [a, c] : o.terms_) r.add_term(a, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    Polynomial r = *this;
    for (const auto& [a, c] : o.terms_) r.add_term(a, -c);
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    Polynomial r(N_);
    for (const auto& [a, ca] : terms_)
        for (const auto& [b, cb] : o.terms_) {
            MultiIndex ab = a;
            for (int i = 0; i < N_; ++i) ab.exponents[i] += b.exponents[i];
            r.add_term(ab, ca * cb);
        }
    return r;
}

Polynomial Polynomial::scaled(const Rational& c) const {
    Polynomial r(N_);
    if (c.is_zero()) return r;
    for (const auto& [a, ca] : terms_) r.add_term(a, ca * c);
    return r;
}

double Polynomial::eval(const Point& x) const {
    double sum = 0.0;
    for (const auto& [a, c] : terms_) {
        double m = c.to_double();
        for (int i = 0; i < N_; ++i)
            for (int k = 0; k < a.exponents[i]; ++k) m *= x[i];
        sum += m;
    }
    return sum;
}

Rational Polynomial::eval_rational(const std::vector<Rational>& x) const {
    Rational sum = 0;
    for (const auto& [a, c] : terms_) {
        Rational m = c;
        for (int i = 0; i < N_; ++i)
            for (int k = 0; k < a.exponents[i]; ++k) m *= x[i];
        sum += m;
    }
    return sum;
}

Polynomial Polynomial::derivative(int i) const {
    Polynomial r(N_);
    for (const auto& [a, c] : terms_) {
        if (a.exponents[i] == 0) continue;
        MultiIndex b = a;
        b.exponents[i] -= 1;
        r.add_term(b, c * Rational(a.exponents[i]));
    }
    return r;
}

Polynomial Polynomial::laplacian() const {
    Polynomial r(N_);
    for (const auto& [a, c] : terms_) {
        for (int i = 0; i < N_; ++i) {
            if (a.exponents[i] < 2) continue;
            MultiIndex b = a;
            b.exponents[i] -= 2;
            r.add_term(b, c * Rational(std::int64_t(a.exponents[i]) *
                                       (a.exponents[i] - 1)));
        }
    }
    return r;
}

namespace harmonics {

std::vector<MultiIndex> monomials_of_degree(int N, int m) {
    std::vector<MultiIndex> out;
    std::vector<int> cur(N, 0);
    std::function<void(int, int)> rec = [&](int i, int rem) {
        if (i == N - 1) {
            cur[i] = rem;
            out.emplace_back(cur);
            return;
        }
        for (int k = rem; k >= 0; --k) {
            cur[i] = k;
            rec(i + 1, rem - k);
        }
    };
    if (m < 0) return out;
    rec(0, m);
    return out;
}

namespace {

long binom(long n, long k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace

long harmonic_dim(int N, int m) {
    if (N < 2) throw std::domain_error("harmonic_dim: requires N >= 2");
    if (m < 2) return binom(m + N - 1, m);
    return binom(m + N - 1, m) - binom(m + N - 3, m - 2);
}

std::vector<Polynomial> harmonic_basis(int N, int m) {
    if (N < 2) throw std::domain_error("harmonic_basis: requires N >= 2");
    const auto cols = monomials_of_degree(N, m);
    const auto rows = monomials_of_degree(N, m - 2);
    const int nc = static_cast<int>(cols.size());
    const int nr = static_cast<int>(rows.size());

    std::map<MultiIndex, int> row_of;
    for (int r = 0; r < nr; ++r) row_of[rows[r]] = r;

    // Laplacian matrix on the monomial basis.
    std::vector<std::vector<Rational>> A(nr, std::vector<Rational>(nc, Rational(0)));
    for (int c = 0; c < nc; ++c) {
        const MultiIndex& a = cols[c];
        for (int i = 0; i < N; ++i) {
            if (a.exponents[i] < 2) continue;
            MultiIndex b = a;
            b.exponents[i] -= 2;
            A[row_of[b]][c] += Rational(std::int64_t(a.exponents[i]) *
                                        (a.exponents[i] - 1));
        }
    }

    // Rational Gauss-Jordan; free columns span the nullspace.
    std::vector<int> pivot_col_of_row(nr, -1);
    std::vector<bool> is_pivot(nc, false);
    int rank = 0;
    for (int c = 0; c < nc && rank < nr; ++c) {
        int piv = -1;
        for (int r = rank; r < nr; ++r)
            if (!A[r][c].is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(A[piv], A[rank]);
        const Rational inv = Rational(1) / A[rank][c];
        for (int cc = c; cc < nc; ++cc) A[rank][cc] *= inv;
        for (int r = 0; r < nr; ++r) {
            if (r == rank || A[r][c].is_zero()) continue;
            const Rational f = A[r][c];
            for (int cc = c; cc < nc; ++cc) A[r][cc] -= f * A[rank][cc];
        }
        pivot_col_of_row[rank] = c;
        is_pivot[c] = true;
        ++rank;
    }

    std::vector<Polynomial> basis;
    for (int c = 0; c < nc; ++c) {
        if (is_pivot[c]) continue;
        Polynomial p(N);
        p.add_term(cols[c], Rational(1));
        for (int r = 0; r < rank; ++r) {
            const Rational& coef = A[r][c];
            if (!coef.is_zero()) p.add_term(cols[pivot_col_of_row[r]], -coef);
        }
        basis.push_back(std::move(p));
    }
    return basis;
}

Rational apolar_pairing(const Polynomial& p, const Polynomial& q) {
    // [P,Q]_m = D_P Q: differentiate Q by each monomial of P.
    Rational total = 0;
    for (const auto& [a, c] : p.terms()) {
        Polynomial d = q;
        for (int i = 0; i < p.dim(); ++i)
            for (int k = 0; k < a.exponents[i]; ++k) d = d.derivative(i);
        // d is now a constant polynomial (or zero)
        Rational val = 0;
        for (const auto& [b, cb] : d.terms())
            if (b.degree() == 0) val += cb;
        total += c * val;
    }
    return total;
}

namespace {

std::int64_t double_factorial(int n) { // (-1)!! = 1
    std::int64_t r = 1;
    for (int k = n; k > 1; k -= 2) r *= k;
    return r;
}

bool all_even(const MultiIndex& a) {
    for (int e : a.exponents)
        if (e % 2) return false;
    return true;
}

} // namespace

double moment_scale(int N, int j) {
    return 2.0 * std::pow(M_PI, 0.5 * N) /
           (std::pow(2.0, 0.5 * j) * special::gamma_fn(0.5 * (j + N)));
}

Rational sphere_moment_rational(const MultiIndex& alpha) {
    if (!all_even(alpha)) return Rational(0);
    Rational r = 1;
    for (int e : alpha.exponents) r *= Rational(double_factorial(e - 1));
    return r;
}

double sphere_moment(const MultiIndex& alpha) {
    if (!all_even(alpha)) return 0.0;
    return moment_scale(alpha.dim(), alpha.degree()) *
           sphere_moment_rational(alpha).to_double();
}

Polynomial zj_polynomial(const Polynomial& p, int j) {
    if (!p.homogeneous())
        throw std::domain_error("zj_polynomial: requires a homogeneous polynomial");
    const int N = p.dim();
    Polynomial out(N);
    for (const MultiIndex& beta : monomials_of_degree(N, j)) {
        const Rational q = sphere_moment_rational(beta);
        if (q.is_zero()) continue;
        Polynomial d = p;
        Rational fact = 1;
        for (int i = 0; i < N; ++i)
            for (int k = 0; k < beta.exponents[i]; ++k) {
                d = d.derivative(i);
                fact *= Rational(k + 1);
            }
        if (d.is_zero()) continue;
        out = out + d.scaled(q / fact);
    }
    return out;
}

std::map<int, double> zj_coefficients(const Polynomial& p, const Point& x) {
    if (!p.homogeneous())
        throw std::domain_error("zj_coefficients: requires a homogeneous polynomial");
    const int m = p.degree();
    std::map<int, double> out;
    for (int j = 2; j <= m; ++j)
        out[j] = moment_scale(p.dim(), j) * zj_polynomial(p, j).eval(x);
    return out;
}

double spherical_average_deficit(const Polynomial& p, const Point& x, double r) {
    const int N = p.dim();
    const double omega = special::sphere_measure(N);
    double sum = 0.0;
    // Non-homogeneous polynomials are fine here: expand degree by degree.
    for (int j = 2; j <= std::max(p.degree(), 0); ++j) {
        Polynomial zj(N);
        for (const MultiIndex& beta : monomials_of_degree(N, j)) {
            const Rational q = sphere_moment_rational(beta);
            if (q.is_zero()) continue;
            Polynomial d = p;
            Rational fact = 1;
            for (int i = 0; i < N; ++i)
                for (int k = 0; k < beta.exponents[i]; ++k) {
                    d = d.derivative(i);
                    fact *= Rational(k + 1);
                }
            if (d.is_zero()) continue;
            zj = zj + d.scaled(q / fact);
        }
        if (zj.is_zero()) continue; // exact cancellation stays exact
        sum += moment_scale(N, j) / omega * zj.eval(x) * std::pow(r, j);
    }
    return sum;
}

RadialKernel RadialKernel::frac(double s) {
    RadialKernel k;
    k.family = Family::frac;
    k.param = s;
    return k;
}
RadialKernel RadialKernel::k1(double zeta) {
    RadialKernel k;
    k.family = Family::K1;
    k.param = zeta;
    return k;
}
RadialKernel RadialKernel::k2(double zeta) {
    RadialKernel k;
    k.family = Family::K2;
    k.param = zeta;
    return k;
}
RadialKernel RadialKernel::custom(std::function<double(double)> f) {
    RadialKernel k;
    k.family = Family::custom;
    k.eval = std::move(f);
    return k;
}

double RadialKernel::operator()(double t, int N) const {
    switch (family) {
        case Family::frac: return std::pow(t, -N - 2.0 * param);
        case Family::K1: return std::pow(1.0 + t, -N - param);
        case Family::K2: return std::pow(t, -N - param) * std::exp(-t);
        case Family::custom: return eval(t);
    }
    return 0.0;
}

double sigma_j(const RadialKernel& K, int N, int j, double eps) {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::domain_error("sigma_j: requires eps in (0,1)");
    if (K.family == RadialKernel::Family::frac) {
        // int_eps^{1/eps} t^{j - 2s - 1} dt, exact antiderivative with a
        // logarithmic branch at j = 2s (only reachable at s = 1).
        const double a = j - 2.0 * K.param;
        if (std::fabs(a) < 1e-14) return -2.0 * std::log(eps);
        return (std::pow(eps, -a) - std::pow(eps, a)) / a;
    }
    // Octave splitting keeps sharply concentrated kernels (the K2 family
    // piles its mass against the inner cutoff) visible to the quadrature.
    auto f = [&](double t) { return K(t, N) * std::pow(t, N - 1.0 + j); };
    double total = 0.0;
    double lo = eps;
    const double hi_end = 1.0 / eps;
    while (lo < hi_end * (1.0 - 1e-14)) {
        const double hi = std::min(hi_end, 2.0 * lo);
        total += quad::adaptive_gk(f, lo, hi, 0.0, 1e-12).value;
        lo = hi;
    }
    return total;
}

double kappa_ratio(const RadialKernel& K, int N, int i, int j, double eps) {
    if (i < 2 || j < 2) throw std::domain_error("kappa_ratio: requires i, j >= 2");
    const double den = sigma_j(K, N, i, eps);
    if (den == 0.0) throw std::domain_error("kappa_ratio: zero denominator");
    return sigma_j(K, N, j, eps) / den;
}

double annulus_frac_lap_poly(const FracOrder& order, const Polynomial& p,
                             const Point& x, double eps) {
    if (!p.homogeneous())
        throw std::domain_error("annulus_frac_lap_poly: requires homogeneous p");
    if (p.dim() != order.N)
        throw std::invalid_argument("annulus_frac_lap_poly: dimension mismatch");
    const double c_ns = special::constants_for(order).c_ns;
    const RadialKernel K = RadialKernel::frac(order.s);
    double sum = 0.0;
    for (int j = 2; j <= p.degree(); ++j) {
        const Polynomial zj = zj_polynomial(p, j);
        if (zj.is_zero()) continue; // harmonic directions cancel exactly
        sum += moment_scale(order.N, j) * zj.eval(x) * sigma_j(K, order.N, j, eps);
    }
    return -c_ns * sum;
}

} // namespace harmonics
} // namespace fraclab
