#include "fraclab/wos.hpp"

#include <cmath>
#include <vector>

#include "fraclab/quadrature.hpp"

namespace fraclab::wos {

namespace {

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t walk)
    : key_(mix64(seed ^ mix64(walk + 0x517cc1b727220a95ULL))) {}

std::uint64_t CounterRng::next_u64() { return mix64(key_ ^ mix64(++counter_)); }

double CounterRng::uniform() {
    // 53-bit mantissa, strictly inside (0,1)
    const std::uint64_t u = next_u64() >> 11;
    return (static_cast<double>(u) + 0.5) * 0x1.0p-53;
}

RadialJumpTable::RadialJumpTable(double s) : s_(s) {
    if (!(s > 0.0) || !(s < 1.0))
        throw std::domain_error("RadialJumpTable: s must lie in (0,1)");
    total_ = special::beta_fn(1.0 - s, s);
    // log-spaced in (1 - w), w = 1 - rho^{-2} running from ~0 to ~1
    const int n = 256;
    w_grid_.reserve(n);
    cdf_grid_.reserve(n);
    // grid over w in (0,1), log-spaced toward both endpoints
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / (n - 1);
        const double w =
            t < 0.5 ? 0.5 * std::pow(10.0, -12.0 * (1.0 - 2.0 * t))
                    : 1.0 - 0.5 * std::pow(10.0, -12.0 * (2.0 * t - 1.0));
        w_grid_.push_back(w);
        cdf_grid_.push_back(special::inc_beta(w, 1.0 - s, s) / total_);
    }
}

double RadialJumpTable::cdf(double rho) const {
    if (rho <= 1.0) return 0.0;
    const double one_minus_w = 1.0 / (rho * rho);
    // deep tail: 1 - w collapses in double; use the power-law asymptotic
    if (one_minus_w < 1e-10)
        return 1.0 - std::pow(one_minus_w, s_) / (s_ * total_);
    return special::inc_beta(1.0 - one_minus_w, 1.0 - s_, s_) / total_;
}

double RadialJumpTable::sample_rho(double q) const {
    // analytic power-law tail: 1 - F ~ (1-w)^s / (s B), rho = (1-w)^{-1/2}
    if (q > cdf_grid_[cdf_grid_.size() - 2]) {
        const double one_minus_w = std::pow(s_ * total_ * (1.0 - q), 1.0 / s_);
        return 1.0 / std::sqrt(std::max(one_minus_w, 1e-300));
    }
    // table bracket + monotone Newton on the closed-form CDF
    size_t lo = 0, hi = cdf_grid_.size() - 1;
    while (hi - lo > 1) {
        const size_t mid = (lo + hi) / 2;
        (cdf_grid_[mid] < q ? lo : hi) = mid;
    }
    double w = w_grid_[lo] +
               (w_grid_[hi] - w_grid_[lo]) *
                   ((q - cdf_grid_[lo]) /
                    std::max(cdf_grid_[hi] - cdf_grid_[lo], 1e-300));
    w = std::min(std::max(w, 1e-15), 1.0 - 1e-15);
    for (int it = 0; it < 60; ++it) {
        const double F = special::inc_beta(w, 1.0 - s_, s_) / total_ - q;
        const double dF =
            std::pow(w, -s_) * std::pow(1.0 - w, s_ - 1.0) / total_;
        double step = F / dF;
        double w_new = w - step;
        if (w_new <= 0.0 || w_new >= 1.0) w_new = w - 0.5 * step; // damp
        w_new = std::min(std::max(w_new, 1e-15), 1.0 - 1e-15);
        if (std::fabs(w_new - w) < 1e-12 * std::max(w, 1e-6)) {
            w = w_new;
            break;
        }
        w = w_new;
    }
    return 1.0 / std::sqrt(1.0 - w);
}

Point sample_ball_jump(const FracOrder& order, double r, CounterRng& rng,
                       const RadialJumpTable& table) {
    if (!(r > 0.0)) throw std::domain_error("sample_ball_jump: radius must be > 0");
    const double rho = table.sample_rho(rng.uniform());
    const int N = order.N;
    Point dir = Point::zero(N);
    switch (N) {
        case 1:
            dir.coords[0] = rng.uniform() < 0.5 ? -1.0 : 1.0;
            break;
        case 2: {
            const double a = 2.0 * M_PI * rng.uniform();
            dir.coords[0] = std::cos(a);
            dir.coords[1] = std::sin(a);
            break;
        }
        case 3: {
            const double t = 2.0 * rng.uniform() - 1.0;
            const double a = 2.0 * M_PI * rng.uniform();
            const double rho2 = std::sqrt(std::max(0.0, 1.0 - t * t));
            dir.coords[0] = t;
            dir.coords[1] = rho2 * std::cos(a);
            dir.coords[2] = rho2 * std::sin(a);
            break;
        }
        default:
            throw std::domain_error("sample_ball_jump: N <= 3");
    }
    return (r * rho) * dir;
}

WalkStats wos_estimate(const FracOrder& order, const Point& x,
                       const std::function<double(const Point&)>& g,
                       const WalkConfig& config) {
    order.require_subcritical();
    if (!(x.x1() > 0.0)) throw std::domain_error("wos_estimate: requires x_1 > 0");
    const RadialJumpTable table(order.s);

    struct WalkOut {
        double score = 0.0;
        int steps = 0;
        bool capped = false;
        bool absorbed = false;
    };
    std::vector<WalkOut> outs(config.n_walks);

    quad::parallel_for(config.n_walks, config.jobs, [&](long i) {
        CounterRng rng(config.seed, static_cast<std::uint64_t>(i));
        Point p = x;
        WalkOut w;
        for (int step = 0; step < config.max_steps; ++step) {
            p = p + sample_ball_jump(order, p.x1(), rng, table);
            ++w.steps;
            if (p.x1() <= 0.0) {
                w.absorbed = true;
                w.score = g(p);
                break;
            }
        }
        w.capped = !w.absorbed;
        outs[i] = w;
    });

    // fixed-order reduction
    double sum = 0.0, sum2 = 0.0, steps = 0.0;
    long capped = 0, absorbed = 0;
    for (const WalkOut& w : outs) {
        sum += w.score;
        sum2 += w.score * w.score;
        steps += w.steps;
        capped += w.capped ? 1 : 0;
        absorbed += w.absorbed ? 1 : 0;
    }
    const double n = static_cast<double>(config.n_walks);
    WalkStats st;
    st.estimate = sum / n;
    const double var = std::max(0.0, (sum2 - sum * sum / n) / std::max(n - 1.0, 1.0));
    st.std_error = std::sqrt(var / n);
    st.mean_steps = steps / n;
    st.capped_fraction = static_cast<double>(capped) / n;
    if (config.norm_check) st.unit_mass = static_cast<double>(absorbed) / n;
    return st;
}

} // namespace fraclab::wos
