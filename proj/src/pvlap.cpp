#include "fraclab/pvlap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <vector>

#include "fraclab/quadrature.hpp"

namespace fraclab {

bool ScalarField::smooth_at(const Point& p) const {
    switch (singular) {
        case SingularKind::none: return true;
        case SingularKind::plane_x1: return p.x1() != plane_offset;
        case SingularKind::point: return p.dist(singular_point) > 0.0;
    }
    return true;
}

ScalarField ScalarField::function(int N, std::function<double(const Point&)> f,
                                  Growth g, double p) {
    ScalarField u;
    u.N = N;
    u.eval = std::move(f);
    u.growth = g;
    u.growth_power = p;
    return u;
}

namespace fields {

ScalarField cosine(int N, const Point& xi) {
    ScalarField u = ScalarField::function(N, {}, ScalarField::Growth::bounded);
    u.eval = [xi](const Point& p) {
        double dot = 0.0;
        for (int i = 0; i < p.dim(); ++i) dot += xi[i] * p[i];
        return std::cos(dot);
    };
    u.osc_scale = xi.norm();
    u.label = "cos(xi.x)";
    return u;
}

ScalarField linear(int N, const Point& coef) {
    ScalarField u = ScalarField::function(N, {}, ScalarField::Growth::power, 1.0);
    u.eval = [coef](const Point& p) {
        double dot = 0.0;
        for (int i = 0; i < p.dim(); ++i) dot += coef[i] * p[i];
        return dot;
    };
    u.label = "linear";
    return u;
}

ScalarField abs_squared(int N) {
    ScalarField u = ScalarField::function(N, {}, ScalarField::Growth::power, 2.0);
    u.eval = [](const Point& p) { return p.norm2(); };
    u.label = "|x|^2";
    return u;
}

ScalarField polynomial(const Polynomial& p) {
    ScalarField u = ScalarField::function(
        p.dim(), {}, ScalarField::Growth::power,
        static_cast<double>(std::max(p.degree(), 0)));
    u.eval = [p](const Point& x) { return p.eval(x); };
    u.label = "polynomial";
    return u;
}

ScalarField fundamental(const FracOrder& order) {
    ScalarField u = ScalarField::function(order.N, {}, ScalarField::Growth::weighted_l1s);
    u.eval = [order](const Point& p) { return kernels::fundamental_ps(order, p); };
    u.singular = ScalarField::SingularKind::point;
    u.singular_point = Point::zero(order.N);
    u.label = "P_s";
    return u;
}

ScalarField profile_q(const FracOrder& order) {
    ScalarField u = ScalarField::function(order.N, {}, ScalarField::Growth::weighted_l1s);
    u.eval = [order](const Point& p) {
        return kernels::boundary_profile(order, p, kernels::Profile::Q_s);
    };
    u.singular = ScalarField::SingularKind::plane_x1;
    u.label = "Q_s";
    return u;
}

ScalarField profile_r(const FracOrder& order) {
    ScalarField u = ScalarField::function(order.N, {}, ScalarField::Growth::power, order.s);
    u.eval = [order](const Point& p) {
        return kernels::boundary_profile(order, p, kernels::Profile::R_s);
    };
    u.singular = ScalarField::SingularKind::plane_x1;
    u.label = "R_s";
    return u;
}

ScalarField separable(const FracOrder& order, double pow, const Polynomial& h) {
    if (h.dim() != order.N - 1)
        throw std::invalid_argument("fields::separable: h must live on R^{N-1}");
    ScalarField u = ScalarField::function(order.N, {}, ScalarField::Growth::weighted_l1s);
    u.eval = [pow, h](const Point& p) {
        if (p.x1() <= 0.0) return 0.0;
        Point xp(std::vector<double>(p.coords.begin() + 1, p.coords.end()));
        return std::pow(p.x1(), pow) * h.eval(xp);
    };
    u.singular = ScalarField::SingularKind::plane_x1;
    u.label = "separable";
    return u;
}

} // namespace fields

void QuadratureSpec::validate() const {
    if (!(eps_inner > 0.0) || !(eps_inner < 1.0))
        throw std::domain_error("QuadratureSpec: eps_inner must lie in (0,1)");
    if (R_outer > 0.0 && !(R_outer > 1.0))
        throw std::domain_error("QuadratureSpec: R_outer must exceed 1");
    if (!antipodal)
        throw std::domain_error("QuadratureSpec: antipodal pairing is required");
    if (!(settle_tol > 0.0))
        throw std::domain_error("QuadratureSpec: settle_tol must be positive");
}

namespace pvlap {

namespace {

using quad::QuadResult;

// Integrate f on [a,b] with optional power-type endpoint singularities
// (local behavior |t - endpoint|^p, p > -1), flattened by substitution.
QuadResult integrate_piece(const quad::Fn1D& f, double a, double b, bool sing_left,
                           bool sing_right, double p, double abs_tol, double rel_tol) {
    // Depth caps: the flattened pieces must not refine into the zone where
    // the evaluation point has collapsed onto the singular set (the
    // integrand there is rounding noise over a measure the flattening has
    // already squashed to ~1e-4 of the piece).
    constexpr int kSingularDepth = 13;
    constexpr int kPlainDepth = 32;
    if (!(b > a)) return {};
    if (sing_left && sing_right) {
        const double m = 0.5 * (a + b);
        QuadResult r = integrate_piece(f, a, m, true, false, p, 0.5 * abs_tol, rel_tol);
        r += integrate_piece(f, m, b, false, true, p, 0.5 * abs_tol, rel_tol);
        return r;
    }
    if (sing_left)
        return quad::adaptive_gk_left_singular(f, a, b, p, abs_tol, rel_tol,
                                               kSingularDepth);
    if (sing_right) {
        auto g = [&f, a, b](double t) { return f(a + b - t); };
        return quad::adaptive_gk_left_singular(g, a, b, p, abs_tol, rel_tol,
                                               kSingularDepth);
    }
    return quad::adaptive_gk(f, a, b, abs_tol, rel_tol, kPlainDepth);
}

// PV engine over the annulus family.  Evaluates
//   c_ns int_{eps<|z|<R} (u(x) - u(x+z)) |z|^{-N-2s} dz
// with every angular rule antipodally paired, so each node pair contributes
// the even combination 2u(x) - u(x+z) - u(x-z).
class Engine {
  public:
    Engine(const FracOrder& order, const ScalarField& u, const Point& x,
           const QuadratureSpec& spec)
        : order_(order), u_(u), x_(x), spec_(spec), N_(order.N) {
        spec_.validate();
        if (u_.N != order.N)
            throw std::invalid_argument("pv_frac_lap: field dimension mismatch");
        if (x_.dim() != order.N)
            throw std::invalid_argument("pv_frac_lap: point dimension mismatch");
        u0_ = eval_u(x_);
        scratch_p_ = x_;
        scratch_m_ = x_;
        c_ns_ = special::constants_for(order_).c_ns;

        // Radii at which the sphere around x first meets the singular set.
        if (u_.singular == ScalarField::SingularKind::plane_x1) {
            sing_radius_ = std::fabs(x_.x1() - u_.plane_offset);
            rad_exponent_ = order_.s - 1.0;
        } else if (u_.singular == ScalarField::SingularKind::point) {
            sing_radius_ = x_.dist(u_.singular_point);
            rad_exponent_ = N_ == 1 ? order_.s - 1.0 : order_.s - N_ + 1.0;
        }
    }

    EvalResult run() {
        EvalResult out;
        double eps = spec_.eps_inner;
        double R = spec_.R_outer > 0.0 ? spec_.R_outer : 1.0 / eps;
        // For fields declared bounded, the u(x)-part of the tail beyond R is
        // folded in analytically: u0 omega_N R^{-2s} / (2s).  The neglected
        // remainder is the kernel average of u(x+z) over |z| > R, which for
        // decaying-mean fields is of lower order; it is carried in the error
        // estimate.
        const bool complete_tail = u_.growth == ScalarField::Growth::bounded;
        const double omega = special::sphere_measure(N_);
        const double two_s = 2.0 * order_.s;
        auto tail_term = [&](double Rcur) {
            if (!complete_tail) return 0.0;
            return u0_ * omega * std::pow(Rcur, -two_s) / two_s;
        };

        // Inner Richardson: for u C^2 at x the inner bands shrink
        // geometrically with known ratio 2^{-(2-2s)}; once frozen, the
        // remaining inner mass is bi / (2^{2-2s} - 1).
        const double inner_ratio = std::pow(2.0, -(2.0 - two_s));
        const bool smooth_here = u_.smooth_at(x_);
        // The Taylor regime of the inner bands starts well below the local
        // structure scale (distance to the singular set, oscillation
        // wavelength); freezing decisions are valid only there.
        const double local_scale =
            std::min({sing_radius_ > 0.0 ? sing_radius_ : 1.0,
                      u_.osc_scale > 0.0 ? 1.0 / u_.osc_scale : 1.0, 1.0});
        const double freeze_eps =
            1e-4 * (sing_radius_ > 0.0 ? std::min(1.0, sing_radius_) : 1.0);

        // The annulus must reach past every compact feature of the field
        // before the Cauchy test may fire; otherwise a distant bump settles
        // the sequence at zero before ever being seen.
        const double R_cover = 2.0 * (x_.norm() + u_.feature_radius);

        scale_ = 1.0;
        double bands = band(eps, R);
        std::vector<double> vals{bands + tail_term(R)};
        bool inner_frozen = false;
        double inner_completion = 0.0;
        double bi_prev = std::numeric_limits<double>::infinity();
        double bo_prev = 0.0, rho_prev = 0.0;
        std::vector<double> outer_hist;
        const bool dbg = std::getenv("FRACLAB_PV_DEBUG") != nullptr;

        for (int k = 1; k <= spec_.max_levels; ++k) {
            scale_ = (1.0 + std::fabs(vals.back())) * std::max(c_ns_, 1e-3);
            const double eps_next = 0.5 * eps;
            double bi = 0.0;
            if (!inner_frozen) {
                bi = band(eps_next, eps);
                const bool in_regime = eps_next <= 0.05 * local_scale;
                const bool noise_floor =
                    in_regime && std::fabs(bi) >= std::fabs(bi_prev);
                const bool small_enough =
                    in_regime && std::fabs(bi) * inner_ratio / (1.0 - inner_ratio) <=
                                     0.05 * spec_.settle_tol * scale_;
                if (noise_floor || small_enough || eps_next <= freeze_eps) {
                    inner_frozen = true;
                    if (smooth_here)
                        inner_completion = (noise_floor ? bi_prev : bi) * inner_ratio /
                                           (1.0 - inner_ratio);
                }
                bi_prev = bi;
            }
            const double bo = band(R, 2.0 * R);
            bands += bi + bo;
            eps = eps_next;
            R *= 2.0;

            // Outer Richardson: when the outer bands decay geometrically
            // with a stable measured ratio, fold the projected remainder in.
            double outer_completion = 0.0;
            if (bo_prev != 0.0 && bo != 0.0 && std::signbit(bo) == std::signbit(bo_prev)) {
                const double rho = bo / bo_prev;
                if (rho > 0.02 && rho < 0.9 && rho_prev > 0.0 &&
                    std::fabs(rho / rho_prev - 1.0) < 0.15)
                    outer_completion = bo * rho / (1.0 - rho);
                rho_prev = rho;
            } else {
                rho_prev = 0.0;
            }
            bo_prev = bo;
            outer_hist.push_back(std::fabs(bo));

            const double V = bands + tail_term(R) + inner_completion + outer_completion;
            vals.push_back(V);
            if (dbg)
                std::fprintf(stderr,
                             "lvl %d eps=%.3g R=%.3g bi=%.3e bo=%.3e oc=%.3e V=%.8f ev=%ld\n",
                             k, eps, R, bi, bo, outer_completion, V, evals_);

            const size_t n = vals.size();
            const double scale_out = 1.0 + std::fabs(c_ns_ * V);
            const double d1 = c_ns_ * std::fabs(vals[n - 1] - vals[n - 2]);
            if (n >= 3 && R >= R_cover) {
                const double d2 = c_ns_ * std::fabs(vals[n - 2] - vals[n - 3]);
                if (d1 <= spec_.settle_tol * scale_out &&
                    d2 <= spec_.settle_tol * scale_out) {
                    out.value = c_ns_ * V;
                    out.error_estimate =
                        c_ns_ * (d1 / c_ns_ + quad_err_ + 0.2 * std::fabs(inner_completion) +
                                 std::fabs(outer_completion) + std::fabs(bo));
                    out.budget = evals_;
                    return out;
                }
            }
            // Divergence: outer bands rising over a 6-level window while the
            // sequence sits far from settling.
            const size_t m = outer_hist.size();
            const bool rising = m >= 7 && outer_hist[m - 1] > 1.4 * outer_hist[m - 7] &&
                                outer_hist[m - 1] > outer_hist[m - 2];
            if ((rising && d1 > 10.0 * spec_.settle_tol * scale_out) ||
                !std::isfinite(V) || std::fabs(V) > 1e100) {
                out.value = c_ns_ * (bands + tail_term(R)); // last finite-annulus value
                out.error_estimate = d1;
                out.diverging = true;
                out.budget = evals_;
                return out;
            }
        }
        const double Vfin = vals.back();
        const double d1 =
            vals.size() >= 2 ? c_ns_ * std::fabs(vals.back() - vals[vals.size() - 2]) : 0.0;
        out.diverging = d1 > 10.0 * spec_.settle_tol * (1.0 + std::fabs(c_ns_ * Vfin));
        // a diverging result carries the plain finite-annulus value, never
        // the Richardson completions
        out.value = out.diverging ? c_ns_ * (bands + tail_term(R)) : c_ns_ * Vfin;
        out.error_estimate = d1 + c_ns_ * quad_err_;
        out.budget = evals_;
        return out;
    }

  private:
    double eval_u(const Point& p) {
        ++evals_;
        return u_.eval(p);
    }

    // 2u(x) - u(x + r theta) - u(x - r theta).  A quadrature node whose
    // computed argument lands exactly on the singular set (rounding at a
    // tangency) reports an infinite field value of measure zero; such a
    // node is nudged off by one part in 3e13 of the radius, which stays far
    // below the quadrature resolution.
    double pair_diff(double r, const double* theta) {
        double up = eval_at(r, theta, +1.0);
        if (!std::isfinite(up)) up = eval_at(r * (1.0 + 3e-13), theta, +1.0);
        double um = eval_at(r, theta, -1.0);
        if (!std::isfinite(um)) um = eval_at(r * (1.0 + 3e-13), theta, -1.0);
        return 2.0 * u0_ - up - um;
    }

    double eval_at(double r, const double* theta, double sign) {
        Point& p = sign > 0 ? scratch_p_ : scratch_m_;
        for (int i = 0; i < N_; ++i) p.coords[i] = x_[i] + sign * r * theta[i];
        return eval_u(p);
    }

    bool singular_field() const {
        return u_.singular != ScalarField::SingularKind::none;
    }

    // Deterministic low-discrepancy phase for angular grids.
    double golden_offset() {
        golden_state_ += 0.6180339887498949;
        golden_state_ -= std::floor(golden_state_);
        return golden_state_;
    }

    // ---- angular integral S(r) = int_{S^{N-1}} (u(x) - u(x + r theta)) ----

    double sphere_diff(double r) {
        switch (N_) {
            case 1: {
                const double theta = 1.0;
                return pair_diff(r, &theta);
            }
            case 2: return sphere_diff_2d(r);
            case 3: return sphere_diff_3d(r);
            default: throw std::domain_error("pv_frac_lap: N > 3 not supported");
        }
    }

    double sphere_diff_2d(double r) {
        auto f = [this, r](double alpha) {
            const double th[2] = {std::cos(alpha), std::sin(alpha)};
            return pair_diff(r, th);
        };
        if (!singular_field()) {
            // Node count follows the field's oscillation scale up to a cap;
            // beyond the cap a golden-ratio phase offset per radius
            // decorrelates the aliasing so unresolved octaves average out
            // instead of drifting.
            int M = std::max(4, spec_.angular_order / 2);
            if (u_.osc_scale > 0.0)
                M = std::max<int>(M, std::min(768.0, 1.2 * u_.osc_scale * r + 8.0));
            const double off = golden_offset();
            double sum = 0.0;
            for (int k = 0; k < M; ++k) sum += f((k + off) * M_PI / M);
            return sum * (M_PI / M);
        }
        // Split the half-circle at the angles where x +- r theta meets the
        // singular set, then integrate adaptively with endpoint flattening.
        std::vector<double> cuts;
        double flat_p = order_.s - 1.0;
        bool power_cut = true;
        if (u_.singular == ScalarField::SingularKind::plane_x1) {
            const double tc = (u_.plane_offset - x_.x1()) / r;
            if (std::fabs(tc) <= 1.0) {
                cuts.push_back(std::acos(tc));
                cuts.push_back(std::acos(-tc));
            }
        } else {
            const Point d = u_.singular_point - x_;
            double alpha = std::atan2(d[1], d[0]);
            if (alpha < 0.0) alpha += M_PI;
            if (alpha >= M_PI) alpha -= M_PI;
            cuts.push_back(alpha);
            // the fundamental-solution family also carries the boundary
            // kink through the singular point's hyperplane; cut there too
            const double tc = (u_.singular_point.x1() - x_.x1()) / r;
            if (std::fabs(tc) <= 1.0) {
                cuts.push_back(std::acos(tc));
                cuts.push_back(std::acos(-tc));
            }
            // bounded peak at fixed r: no power law to flatten, but the
            // peak tails need the deep plain refinement path
            power_cut = false;
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        std::vector<double> pts{0.0};
        for (double c : cuts)
            if (c > 1e-12 && c < M_PI - 1e-12) pts.push_back(c);
        pts.push_back(M_PI);
        QuadResult total;
        for (size_t i = 0; i + 1 < pts.size(); ++i) {
            const bool sl = power_cut && i > 0;
            const bool sr = power_cut && i + 2 < pts.size();
            total += integrate_piece(f, pts[i], pts[i + 1], sl, sr,
                                     flat_p < 0.0 ? flat_p : 0.0,
                                     0.003 * spec_.settle_tol * scale_, 1e-8);
        }
        return total.value;
    }

    double sphere_diff_3d(double r) {
        // S(r) = int_0^1 dt int_0^{2pi} dphi pair(theta(t,phi)),
        // theta = (t, sqrt(1-t^2) cos phi, sqrt(1-t^2) sin phi).
        int Mphi = std::max(8, (spec_.angular_order / 3 + 3) / 4 * 4);
        if (u_.osc_scale > 0.0)
            Mphi = std::max<int>(Mphi, std::min(512.0, 1.2 * u_.osc_scale * r + 8.0));
        auto ring = [this, r, Mphi](double t) {
            const double rho = std::sqrt(std::max(0.0, 1.0 - t * t));
            const double off = golden_offset();
            double sum = 0.0;
            for (int k = 0; k < Mphi; ++k) {
                const double phi = (k + off) * 2.0 * M_PI / Mphi;
                const double th[3] = {t, rho * std::cos(phi), rho * std::sin(phi)};
                sum += pair_diff(r, th);
            }
            return sum * (2.0 * M_PI / Mphi);
        };
        if (u_.singular == ScalarField::SingularKind::plane_x1) {
            const double tc = std::fabs(u_.plane_offset - x_.x1()) / r;
            std::vector<double> pts{0.0};
            if (tc < 1.0 - 1e-12 && tc > 1e-12) pts.push_back(tc);
            pts.push_back(1.0);
            QuadResult total;
            for (size_t i = 0; i + 1 < pts.size(); ++i) {
                const bool sl = i > 0;
                const bool sr = i + 2 < pts.size();
                total += integrate_piece(ring, pts[i], pts[i + 1], sl, sr,
                                         order_.s - 1.0, 0.01 * spec_.settle_tol * scale_, 1e-7);
            }
            return total.value;
        }
        if (u_.singular == ScalarField::SingularKind::point)
            throw std::domain_error(
                "pv_frac_lap: point-singular fields are not supported for N = 3");
        const int Mt = std::max(6, spec_.angular_order / 6);
        return quad::gauss_on(ring, 0.0, 1.0, Mt);
    }

    // ---- radial integral over one band [a, b] of r^{-1-2s} S(r) ----

    double band(double a, double b) {
        const double expo = -1.0 - 2.0 * order_.s;
        auto g = [this, expo](double r) {
            return std::pow(r, expo) * sphere_diff(r);
        };
        const double rad_abs = 0.2 * spec_.settle_tol * scale_;
        double total = 0.0;
        double lo = a;
        while (lo < b * (1.0 - 1e-14)) {
            const double hi = std::min(b, 2.0 * lo);
            if (!singular_field()) {
                // Two regimes.  While the field's oscillation is resolvable
                // within the panel cap, adaptive integration controls the
                // band error against the settle target.  Past the cap the
                // band cannot be resolved at sane cost; fixed panels with a
                // golden phase shift decorrelate the aliasing, which then
                // averages out across the annulus family instead of
                // drifting.
                const int cap = N_ == 1 ? 64 : 16;
                const double need =
                    u_.osc_scale > 0.0 ? u_.osc_scale * (hi - lo) / 3.5 : 0.0;
                if (need <= cap) {
                    QuadResult rr = quad::adaptive_gk(g, lo, hi, rad_abs, 1e-8, 10);
                    total += rr.value;
                    quad_err_ += rr.error;
                } else {
                    const double h = (hi - lo) / cap;
                    const double ph = golden_offset();
                    double edge = lo;
                    for (int p = 0; p <= cap; ++p) {
                        const double next = p == cap ? hi : lo + (p + ph) * h;
                        if (next > edge)
                            total += quad::gauss_on(g, edge, next, spec_.radial_order);
                        edge = next;
                    }
                }
            } else if (sing_radius_ > lo * (1.0 + 1e-14) &&
                       sing_radius_ < hi * (1.0 - 1e-14)) {
                QuadResult r1 = integrate_piece(g, lo, sing_radius_, false, true,
                                                rad_exponent_, rad_abs, 1e-8);
                QuadResult r2 = integrate_piece(g, sing_radius_, hi, true, false,
                                                rad_exponent_, rad_abs, 1e-8);
                total += r1.value + r2.value;
                quad_err_ += r1.error + r2.error;
            } else {
                const bool sl = std::fabs(lo - sing_radius_) < 1e-14 * sing_radius_;
                const bool sr = std::fabs(hi - sing_radius_) < 1e-14 * sing_radius_;
                QuadResult rr = integrate_piece(g, lo, hi, sl, sr, rad_exponent_,
                                                rad_abs, 1e-8);
                total += rr.value;
                quad_err_ += rr.error;
            }
            lo = hi;
        }
        return total;
    }

    const FracOrder& order_;
    const ScalarField& u_;
    Point x_;
    QuadratureSpec spec_;
    int N_;
    double u0_ = 0.0;
    double c_ns_ = 0.0;
    Point scratch_p_, scratch_m_;
    long evals_ = 0;
    double quad_err_ = 0.0;
    double sing_radius_ = -1.0;
    double rad_exponent_ = 0.0;
    double scale_ = 1.0;
    double golden_state_ = 0.25;
};

} // namespace

EvalResult pv_frac_lap(const FracOrder& order, const ScalarField& u, const Point& x,
                       const QuadratureSpec& spec) {
    Engine e(order, u, x, spec);
    return e.run();
}

EvalResult symmetrized_frac_lap(const FracOrder& order, const ScalarField& u,
                                const Point& x, const QuadratureSpec& spec) {
    if (!u.smooth_at(x))
        throw std::domain_error("symmetrized_frac_lap: u must be C^2 at x");
    // The paired pv rule already evaluates (c/2) * (second differences over
    // the full annulus); the two operations coincide numerically.
    Engine e(order, u, x, spec);
    return e.run();
}

Profile1D Profile1D::power_plus(double p) {
    Profile1D prof;
    prof.eval = [p](double t) { return t > 0.0 ? std::pow(t, p) : 0.0; };
    prof.singular_at_zero = true;
    prof.sing_exponent = p;
    return prof;
}

namespace {

// int_{eps < |z'| < 1/eps} (z1^2 + |z'|^2)^{-(N+2s)/2} |z'|^j dz', reduced to
// the incomplete Beta after w = rho^2/(z1^2+rho^2).  M = N-1 >= 1.
double annular_kernel_moment(int N, double s, int j, double z1, double eps) {
    const int M = N - 1;
    const double a = 0.5 * (M + j);
    const double b = 0.5 * (1.0 + 2.0 * s - j);
    auto w_of = [z1](double rho) { return rho * rho / (z1 * z1 + rho * rho); };
    const double w_lo = w_of(eps), w_hi = w_of(1.0 / eps);
    const double incomplete =
        special::inc_beta(w_hi, a, b) - special::inc_beta(w_lo, a, b);
    return special::sphere_measure(M) * 0.5 *
           std::pow(std::fabs(z1), M + j - N - 2.0 * s) * incomplete;
}

} // namespace

EvalResult separable_frac_lap(const FracOrder& order, const Profile1D& u1d,
                              const Polynomial& h, const Point& x,
                              const QuadratureSpec& spec) {
    spec.validate();
    if (order.N < 2)
        throw std::domain_error("separable_frac_lap: requires N >= 2");
    if (h.dim() != order.N - 1)
        throw std::invalid_argument("separable_frac_lap: h must live on R^{N-1}");
    if (!(x.x1() > 0.0))
        throw std::domain_error("separable_frac_lap: requires an interior point");

    const int N = order.N;
    const int M = N - 1;
    const double s = order.s;
    const double x1 = x.x1();
    const Point xp(std::vector<double>(x.coords.begin() + 1, x.coords.end()));
    const double c_ns = special::constants_for(order).c_ns;
    const double h_at = h.eval(xp);

    // Z_j(x') of the x'-factor, exact rational core; empty for harmonic h.
    struct ZTerm {
        int j;
        double value;
    };
    std::vector<ZTerm> zterms;
    for (int j = 2; j <= std::max(h.degree(), 0); ++j) {
        Polynomial zj(M);
        for (const MultiIndex& beta : harmonics::monomials_of_degree(M, j)) {
            const Rational q = harmonics::sphere_moment_rational(beta);
            if (q.is_zero()) continue;
            Polynomial d = h;
            Rational fact = 1;
            for (int i = 0; i < M; ++i)
                for (int k = 0; k < beta.exponents[i]; ++k) {
                    d = d.derivative(i);
                    fact *= Rational(k + 1);
                }
            if (d.is_zero()) continue;
            zj = zj + d.scaled(q / fact);
        }
        if (zj.is_zero()) continue; // exact spherical cancellation
        zterms.push_back({j, harmonics::moment_scale(M, j) * zj.eval(xp)});
    }

    long evals = 0;
    auto level_value = [&](double eps) {
        // A: x1-marginal PV integral against the annular kernel mass.
        auto A_integrand = [&](double z1) {
            evals += 2;
            const double even_diff =
                2.0 * u1d.eval(x1) - u1d.eval(x1 + z1) - u1d.eval(x1 - z1);
            return even_diff * annular_kernel_moment(N, s, 0, z1, eps);
        };
        // B: the K_{z1}-weighted spherical-cancellation term of h.
        auto B_weight = [&](int j, double z1) {
            return annular_kernel_moment(N, s, j, z1, eps) /
                   special::sphere_measure(M);
        };

        const double lo = eps, hi = 1.0 / eps;
        const double cut = x1; // u1d(x1 - z1) crosses its singularity here
        const double flat = u1d.sing_exponent < 0.0 ? u1d.sing_exponent : 0.0;

        // Octave-wise sweep: the marginal spans tens of decades at deep
        // cutoffs, far beyond what a single adaptive call can resolve.
        auto integrate_marginal = [&](const quad::Fn1D& f) {
            QuadResult total;
            double a = lo;
            while (a < hi * (1.0 - 1e-14)) {
                const double b = std::min(hi, 2.0 * a);
                const bool cut_inside = u1d.singular_at_zero &&
                                        cut > a * (1.0 + 1e-12) &&
                                        cut < b * (1.0 - 1e-12);
                if (cut_inside) {
                    total += integrate_piece(f, a, cut, false, true, flat, 1e-10, 1e-8);
                    total += integrate_piece(f, cut, b, true, false, flat, 1e-10, 1e-8);
                } else {
                    const bool sl = u1d.singular_at_zero &&
                                    std::fabs(a - cut) < 1e-12 * cut;
                    const bool sr = u1d.singular_at_zero &&
                                    std::fabs(b - cut) < 1e-12 * cut;
                    total += integrate_piece(f, a, b, sl, sr, flat, 1e-10, 1e-8);
                }
                a = b;
            }
            return total.value;
        };

        double V = h_at * integrate_marginal(A_integrand);
        for (const ZTerm& zt : zterms) {
            auto f = [&](double z1) {
                evals += 2;
                const double even_sum = u1d.eval(x1 + z1) + u1d.eval(x1 - z1);
                return even_sum * B_weight(zt.j, z1);
            };
            V -= zt.value * integrate_marginal(f);
        }
        return c_ns * V;
    };

    EvalResult out;
    double eps = spec.eps_inner;
    std::vector<double> vals{level_value(eps)};
    for (int k = 1; k <= spec.max_levels; ++k) {
        eps *= 0.5;
        vals.push_back(level_value(eps));
        const size_t n = vals.size();
        const double scale = 1.0 + std::fabs(vals.back());
        const double d1 = std::fabs(vals[n - 1] - vals[n - 2]);
        if (n >= 3) {
            const double d2 = std::fabs(vals[n - 2] - vals[n - 3]);
            if (d1 <= spec.settle_tol * scale && d2 <= spec.settle_tol * scale) {
                out.value = vals.back();
                out.error_estimate = d1;
                out.budget = evals;
                return out;
            }
        }
    }
    out.value = vals.back();
    out.error_estimate = std::fabs(vals[vals.size() - 1] - vals[vals.size() - 2]);
    out.diverging =
        out.error_estimate > 10.0 * spec.settle_tol * (1.0 + std::fabs(out.value));
    out.budget = evals;
    return out;
}

EvalResult weighted_l1s_norm(const FracOrder& order, const ScalarField& u, double tol) {
    const int N = order.N;
    const double s = order.s;
    long evals = 0;
    Point p = Point::zero(N);

    auto shell_avg_abs = [&](double r) {
        switch (N) {
            case 1: {
                p.coords[0] = r;
                const double a = std::fabs(u.eval(p));
                p.coords[0] = -r;
                const double b = std::fabs(u.eval(p));
                evals += 2;
                return a + b;
            }
            case 2: {
                const int M = 64;
                double sum = 0.0;
                for (int k = 0; k < M; ++k) {
                    const double alpha = (k + 0.5) * 2.0 * M_PI / M;
                    p.coords[0] = r * std::cos(alpha);
                    p.coords[1] = r * std::sin(alpha);
                    sum += std::fabs(u.eval(p));
                }
                evals += M;
                return sum * (2.0 * M_PI / M);
            }
            case 3: {
                const int Mt = 12, Mphi = 16;
                const auto& rule = quad::gauss_legendre(Mt);
                double sum = 0.0;
                for (int i = 0; i < Mt; ++i) {
                    const double t = rule.x[i];
                    const double rho = std::sqrt(std::max(0.0, 1.0 - t * t));
                    double ring = 0.0;
                    for (int k = 0; k < Mphi; ++k) {
                        const double phi = (k + 0.5) * 2.0 * M_PI / Mphi;
                        p.coords[0] = r * t;
                        p.coords[1] = r * rho * std::cos(phi);
                        p.coords[2] = r * rho * std::sin(phi);
                        ring += std::fabs(u.eval(p));
                    }
                    evals += Mphi;
                    sum += rule.w[i] * ring * (2.0 * M_PI / Mphi);
                }
                return sum;
            }
            default:
                throw std::domain_error("weighted_l1s_norm: N > 3 not supported");
        }
    };

    auto integrand = [&](double r) {
        return shell_avg_abs(r) * std::pow(r, N - 1.0) /
               (1.0 + std::pow(r, N + 2.0 * s));
    };

    EvalResult out;
    double R = 1.0;
    double total = quad::adaptive_gk(integrand, 0.0, R, tol, tol).value;
    double prev_inc = std::numeric_limits<double>::infinity();
    int stalled = 0;
    for (int m = 0; m < 24; ++m) {
        const double R2 = 4.0 * R;
        const double inc = quad::adaptive_gk(integrand, R, R2, tol, tol).value;
        total += inc;
        R = R2;
        if (inc <= tol * (1.0 + total) && prev_inc <= 4.0 * tol * (1.0 + total)) {
            out.value = total;
            out.error_estimate = inc;
            out.budget = evals;
            return out;
        }
        stalled = inc > 0.5 * prev_inc ? stalled + 1 : 0;
        if (stalled >= 3) {
            out.value = total;
            out.error_estimate = inc;
            out.diverging = true;
            out.budget = evals;
            return out;
        }
        prev_inc = inc;
    }
    out.value = total;
    out.error_estimate = prev_inc;
    out.diverging = true;
    out.budget = evals;
    return out;
}

} // namespace pvlap
} // namespace fraclab
