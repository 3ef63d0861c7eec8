/// @file wos.hpp
/// @brief Walk-on-spheres Monte Carlo for the 2s-stable process in the half
///        space.  Each step jumps once from the exact ball exit law (the
///        pure-jump process leaves a ball in a single jump); the walk
///        absorbs on reaching {y_1 <= 0}.  Per-walk counter-based random
///        streams keep estimates bit-identical across worker counts.

#ifndef FRACLAB_WOS_HPP
#define FRACLAB_WOS_HPP

#include <cstdint>
#include <functional>

#include "fraclab/kernels.hpp"
#include "fraclab/special.hpp"

namespace fraclab {

struct WalkConfig {
    long n_walks = 100000;
    int max_steps = 1000;    // bias cap; capped walks contribute zero
    std::uint64_t seed = 1;
    bool norm_check = false; // also track the unit-mass estimate (g == 1)
    int jobs = 1;
};

struct WalkStats {
    double estimate = 0.0;
    double std_error = 0.0;       // sample standard deviation / sqrt(n)
    double mean_steps = 0.0;
    double capped_fraction = 0.0; // fraction of walks hitting max_steps
    double unit_mass = 0.0;       // absorbed fraction, when norm_check is on
};

namespace wos {

/// Stateless counter-based stream: value i of the stream keyed by
/// (seed, walk) is a pure function of the key, so any evaluation order and
/// any worker partition produce identical draws.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t walk);
    double uniform();          // in (0,1)
    std::uint64_t next_u64();

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Radial factor of the ball exit law.  For the unit ball the exit radius
/// rho > 1 has the N-independent law
///   P(rho <= R) = I_w(1-s, s) / B(1-s, s),  w = 1 - R^{-2},
/// inverted from a monotone log-spaced table with Newton polish; the far
/// tail (q -> 1) uses the analytic power-law branch.
class RadialJumpTable {
  public:
    explicit RadialJumpTable(double s);
    double sample_rho(double q) const; // quantile, q in (0,1)
    double cdf(double rho) const;

  private:
    double s_;
    double total_;
    std::vector<double> w_grid_;
    std::vector<double> cdf_grid_;
};

/// One exit jump from the ball B_r(center implied at the walker): a vector
/// offset with |offset| > r distributed by the ball Poisson kernel of the
/// probabilistic normalization.
Point sample_ball_jump(const FracOrder& order, double r, CounterRng& rng,
                       const RadialJumpTable& table);

/// Harmonic-measure estimate: from x with x_1 > 0 jump with ball radius
/// x_1 until landing in {y_1 <= 0}, then score g(landing).
WalkStats wos_estimate(const FracOrder& order, const Point& x,
                       const std::function<double(const Point&)>& g,
                       const WalkConfig& config);

} // namespace wos
} // namespace fraclab

#endif
