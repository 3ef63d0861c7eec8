#include "fraclab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

namespace fraclab::quad {

namespace {

// 15-point Kronrod nodes on [-1,1] (nonnegative half) and weights, with the
// embedded 7-point Gauss weights.  Values from the standard QUADPACK tables.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
    double value;
    double error;
};

PanelResult gk15(const Fn1D& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int j = 0; j < 7; ++j) {
        fv[j] = f(c - h * kXgk[j]);
        fv[14 - j] = f(c + h * kXgk[j]);
    }
    fv[7] = f(c);
    double resk = kWgk[7] * fv[7];
    double resg = kWg[3] * fv[7];
    for (int j = 0; j < 7; ++j) {
        resk += kWgk[j] * (fv[j] + fv[14 - j]);
        if (j % 2 == 1) resg += kWg[j / 2] * (fv[j] + fv[14 - j]);
    }
    return {resk * h, std::fabs((resk - resg) * h)};
}

void adaptive_rec(const Fn1D& f, double a, double b, double tol, int depth,
                  int max_depth, QuadResult& out) {
    const PanelResult p = gk15(f, a, b);
    out.evals += 15;
    if (p.error <= tol || depth >= max_depth || !(b - a > 0.0)) {
        out.value += p.value;
        out.error += p.error;
        if (p.error > tol && depth >= max_depth) out.converged = false;
        return;
    }
    // Per-panel tolerance (not halved per level): on self-similar endpoint
    // singularities a halving allocation forces every sibling to fail and
    // the tree goes exponential; with a flat allocation the refinement
    // stays a path toward the singular end.
    const double m = 0.5 * (a + b);
    adaptive_rec(f, a, m, tol, depth + 1, max_depth, out);
    adaptive_rec(f, m, b, tol, depth + 1, max_depth, out);
}

} // namespace

QuadResult adaptive_gk(const Fn1D& f, double a, double b, double abs_tol,
                       double rel_tol, int max_depth) {
    QuadResult out;
    if (!(b > a)) return out;
    // One forced bisection: a single panel's embedded estimate can miss
    // structure that both the Gauss and Kronrod nodes step over.
    const PanelResult whole = gk15(f, a, b);
    const double m = 0.5 * (a + b);
    const PanelResult left = gk15(f, a, m);
    const PanelResult right = gk15(f, m, b);
    out.evals = 45;
    const double refined = left.value + right.value;
    const double disc = std::fabs(whole.value - refined);
    const double tol = std::max(abs_tol, rel_tol * std::fabs(refined));
    if (disc <= tol && left.error + right.error <= tol) {
        out.value = refined;
        out.error = disc + left.error + right.error;
        return out;
    }
    out = QuadResult{};
    out.evals = 45;
    adaptive_rec(f, a, m, 0.5 * tol, 1, max_depth, out);
    adaptive_rec(f, m, b, 0.5 * tol, 1, max_depth, out);
    return out;
}

QuadResult adaptive_gk_to_inf(const Fn1D& f, double a, double abs_tol,
                              double rel_tol, int max_depth) {
    // x = a + t/(1-t), dx = dt/(1-t)^2
    auto g = [&f, a](double t) {
        const double om = 1.0 - t;
        const double x = a + t / om;
        return f(x) / (om * om);
    };
    return adaptive_gk(g, 0.0, 1.0, abs_tol, rel_tol, max_depth);
}

QuadResult adaptive_gk_left_singular(const Fn1D& f, double a, double b, double p,
                                     double abs_tol, double rel_tol, int max_depth) {
    if (!(p > -1.0)) throw std::invalid_argument("adaptive_gk_left_singular: p <= -1");
    const double q = 1.0 + p;
    const double W = std::pow(b - a, q);
    // x = a + w^{1/q}; the w-integrand (f includes the x^p weight) is then
    // bounded at w = 0.  Near w = 0 the computed x collapses onto the
    // singular endpoint and f turns into rounding noise, so callers bound
    // max_depth to stay above that zone; the flattening keeps the measure
    // of whatever is left negligible.
    // The offset floor keeps evaluation points strictly off a singular
    // endpoint at nonzero abscissa (below ~ulp the computed point would
    // collapse onto it); for a = 0 the offset itself is the argument and no
    // floor is needed.
    const double floor_off = 1e-13 * std::fabs(a);
    auto g = [&, floor_off](double w) {
        const double x = a + std::max(std::pow(w, 1.0 / q), floor_off);
        return f(x) * std::pow(w, 1.0 / q - 1.0) / q;
    };
    return adaptive_gk(g, 0.0, W, abs_tol, rel_tol, max_depth);
}

const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    // Newton iteration on P_n with the Chebyshev initial guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        rule.x[i] = -x;
        rule.x[n - 1 - i] = x;
        rule.w[i] = rule.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

double gauss_on(const Fn1D& f, double a, double b, int n) {
    const GaussRule& r = gauss_legendre(n);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += r.w[i] * f(c + h * r.x[i]);
    return sum * h;
}

void parallel_for(long n, int jobs, const std::function<void(long)>& body) {
    if (jobs <= 1 || n < 2) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    const int workers = static_cast<int>(std::min<long>(jobs, n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const long chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const long lo = w * chunk;
        const long hi = std::min(n, lo + chunk);
        pool.emplace_back([lo, hi, &body] {
            for (long i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace fraclab::quad
