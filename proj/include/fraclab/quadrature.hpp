/// @file quadrature.hpp
/// @brief 1D adaptive Gauss-Kronrod integration, Gauss-Legendre node tables,
///        tail mappings, and a deterministic indexed parallel-for.

#ifndef FRACLAB_QUADRATURE_HPP
#define FRACLAB_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace fraclab::quad {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;   // estimated absolute error
    long evals = 0;
    bool converged = true;

    QuadResult& operator+=(const QuadResult& o) {
        value += o.value;
        error += o.error;
        evals += o.evals;
        converged = converged && o.converged;
        return *this;
    }
};

using Fn1D = std::function<double(double)>;

/// Adaptive G7-K15 on [a, b].  Bisects until the local Kronrod error
/// estimate meets tol scaled by interval share; max_depth bounds recursion
/// (integrable endpoint singularities converge geometrically under
/// bisection, so depth ~ 50 is ample).
QuadResult adaptive_gk(const Fn1D& f, double a, double b,
                       double abs_tol = 1e-10, double rel_tol = 1e-10,
                       int max_depth = 52);

/// int_a^inf f, via the algebraic map x = a + t/(1-t).
QuadResult adaptive_gk_to_inf(const Fn1D& f, double a,
                              double abs_tol = 1e-10, double rel_tol = 1e-10,
                              int max_depth = 52);

/// int_a^b x^{p} g(x) dx with integrable endpoint weight at a (p > -1),
/// flattened by the substitution x - a = w^{1/(1+p)}.  f receives x and must
/// include the x^p factor itself; the substitution only reparametrizes.
QuadResult adaptive_gk_left_singular(const Fn1D& f, double a, double b, double p,
                                     double abs_tol = 1e-10, double rel_tol = 1e-10,
                                     int max_depth = 52);

/// Gauss-Legendre nodes/weights on [-1, 1], cached per n.
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};
const GaussRule& gauss_legendre(int n);

/// Fixed (non-adaptive) Gauss-Legendre on [a,b].
double gauss_on(const Fn1D& f, double a, double b, int n);

/// Deterministic parallel map: body(i) for i in [0, n); results must be
/// written by index by the caller.  jobs <= 1 runs inline.  Chunking is by
/// contiguous blocks, so output is independent of the worker count.
void parallel_for(long n, int jobs, const std::function<void(long)>& body);

} // namespace fraclab::quad

#endif
