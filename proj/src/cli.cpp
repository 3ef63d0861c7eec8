#include "fraclab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fraclab/harmonics.hpp"
#include "fraclab/limits.hpp"
#include "fraclab/pvlap.hpp"
#include "fraclab/wos.hpp"

namespace fraclab::cli {

using nlohmann::json;

namespace {

void attach_common(CLI::App* sub, RunConfig& cfg) {
    sub->fallthrough(); // app-level options (--config) stay reachable
    sub->add_option("--N", cfg.N, "space dimension");
    sub->add_option("--s", cfg.s, "fractional order in (0,1)");
    sub->add_option("--jobs", cfg.jobs, "worker pool size");
    sub->add_option("--out", cfg.out, "output path (default stdout)");
    sub->add_option("--format", cfg.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
}

std::uint64_t env_seed_fallback(std::uint64_t current, bool seed_given) {
    if (seed_given) return current;
    if (const char* e = std::getenv("FRACLAB_SEED")) {
        try {
            return static_cast<std::uint64_t>(std::stoull(e));
        } catch (...) {
            throw CLI::ValidationError("FRACLAB_SEED", "not a valid integer seed");
        }
    }
    return current;
}

void validate(const RunConfig& cfg) {
    FracOrder order(cfg.N, cfg.s); // throws on bad (N, s)
    switch (cfg.task) {
        case Task::eval:
        case Task::kernel:
            if (!cfg.x.empty() && static_cast<int>(cfg.x.size()) != cfg.N)
                throw CLI::ValidationError("--x", "dimension does not match --N");
            break;
        case Task::converge:
            if (!cfg.box_lo.empty() &&
                (static_cast<int>(cfg.box_lo.size()) != cfg.N ||
                 cfg.box_lo.size() != cfg.box_hi.size()))
                throw CLI::ValidationError("--box-lo/--box-hi",
                                           "dimension does not match --N");
            break;
        default:
            break;
    }
    if (cfg.task != Task::constants && cfg.task != Task::verify_poly)
        order.require_subcritical_or_log();
}

std::string norm_mode_name(NormMode m) {
    return m == NormMode::paper_K ? "paper" : "probabilistic";
}

// ---------------------------------------------------------------------------
// output plumbing
// ---------------------------------------------------------------------------

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << text;
}

json base_report(const char* task) {
    json j;
    j["task"] = task;
    j["versions"] = {{"fraclab", kVersion}};
    j["diagnostics"] = json::object();
    return j;
}

std::string csv_header(const std::string& task, int schema_version) {
    std::ostringstream os;
    os << "# fraclab v" << kVersion << " schema=" << task << ":" << schema_version
       << "\n";
    return os.str();
}

Point point_of(const std::vector<double>& v, int N, double fallback_x1) {
    if (!v.empty()) return Point(std::vector<double>(v));
    Point p = Point::zero(N);
    p.coords[0] = fallback_x1;
    return p;
}

// ---------------------------------------------------------------------------
// task runners
// ---------------------------------------------------------------------------

int run_constants(const RunConfig& cfg) {
    const FracOrder order(cfg.N, cfg.s);
    const Constants c = special::constants_for(order);
    if (cfg.format == "csv") {
        std::ostringstream csv;
        csv << csv_header("constants", 1);
        csv << "name,value\n";
        csv.precision(17);
        csv << "c_ns," << c.c_ns << "\nkappa_ns," << c.kappa_ns << "\nK_s_paper,"
            << c.K_s_paper << "\nC_s_paper," << c.C_s_paper << "\nC_s_derived,"
            << c.C_s_derived << "\nomega_N," << c.omega_N << "\n";
        write_text(cfg.out, csv.str());
        return 0;
    }
    json j = base_report("constants");
    j["inputs"] = {{"N", cfg.N}, {"s", cfg.s}};
    j["outputs"] = {{"c_ns", c.c_ns},
                    {"kappa_ns", c.kappa_ns},
                    {"K_s_paper", c.K_s_paper},
                    {"C_s_paper", c.C_s_paper},
                    {"C_s_derived", c.C_s_derived},
                    {"omega_N", c.omega_N}};
    if (cfg.N >= 2)
        j["outputs"]["cs_ratio_numeric"] = identities::cs_ratio_numeric(cfg.N, cfg.s);
    write_text(cfg.out, j.dump(2) + "\n");
    return 0;
}

ScalarField field_by_name(const RunConfig& cfg, const FracOrder& order) {
    if (cfg.field == "cos") {
        Point xi = point_of(cfg.xi, cfg.N, 1.0);
        return fields::cosine(cfg.N, xi);
    }
    if (cfg.field == "ps") return fields::fundamental(order);
    if (cfg.field == "qs") return fields::profile_q(order);
    if (cfg.field == "rs") return fields::profile_r(order);
    throw CLI::ValidationError("--field", "unknown field: " + cfg.field);
}

int run_eval(const RunConfig& cfg) {
    const FracOrder order(cfg.N, cfg.s);
    ScalarField u = field_by_name(cfg, order);
    const Point x = point_of(cfg.x, cfg.N, 1.0);
    QuadratureSpec spec;
    spec.eps_inner = cfg.eps;
    spec.R_outer = cfg.R_outer;
    spec.settle_tol = std::min(cfg.tol, 1e-3);
    EvalResult r = pvlap::pv_frac_lap(order, u, x, spec);
    json j = base_report("eval");
    j["inputs"] = {{"N", cfg.N}, {"s", cfg.s}, {"field", cfg.field}, {"x", cfg.x}};
    j["outputs"] = {{"value", r.value},
                    {"error_estimate", r.error_estimate},
                    {"diverging", r.diverging},
                    {"budget", r.budget}};
    if (r.diverging) j["diagnostics"]["diverging"] = true;
    write_text(cfg.out, j.dump(2) + "\n");
    return r.diverging ? 2 : 0;
}

int run_kernel(const RunConfig& cfg) {
    const FracOrder order(cfg.N, cfg.s);
    const Point x = point_of(cfg.x, cfg.N, 0.5);
    double value = 0.0;
    if (cfg.kernel == "green-ball") {
        value = kernels::green_ball(order, x, point_of(cfg.y, cfg.N, 0.25), cfg.r);
    } else if (cfg.kernel == "green-halfspace") {
        value = kernels::green_halfspace(order, x, point_of(cfg.y, cfg.N, 0.25));
    } else if (cfg.kernel == "poisson-ball") {
        value = kernels::poisson_ball(order, x, point_of(cfg.y, cfg.N, 2.0), cfg.r,
                                      cfg.norm_mode);
    } else if (cfg.kernel == "poisson-halfspace") {
        value = kernels::poisson_halfspace(order, x, point_of(cfg.y, cfg.N, -1.0),
                                           cfg.norm_mode);
    } else if (cfg.kernel == "fundamental") {
        value = kernels::fundamental_ps(order, x);
    } else if (cfg.kernel == "profile-q") {
        value = kernels::boundary_profile(order, x, kernels::Profile::Q_s);
    } else if (cfg.kernel == "profile-r") {
        value = kernels::boundary_profile(order, x, kernels::Profile::R_s);
    } else if (cfg.kernel == "superposition-mu") {
        value = kernels::poisson_superposition(order, x,
                                               BoundaryLayerMeasure::layer_mu(cfg.t),
                                               cfg.norm_mode);
    } else if (cfg.kernel == "superposition-nu") {
        value = kernels::poisson_superposition(order, x,
                                               BoundaryLayerMeasure::layer_nu(cfg.t),
                                               cfg.norm_mode);
    } else {
        throw CLI::ValidationError("--kernel", "unknown kernel: " + cfg.kernel);
    }
    json j = base_report("kernel");
    j["inputs"] = {{"N", cfg.N},       {"s", cfg.s}, {"kernel", cfg.kernel},
                   {"x", cfg.x},       {"y", cfg.y}, {"r", cfg.r},
                   {"t", cfg.t},       {"norm_mode", norm_mode_name(cfg.norm_mode)}};
    j["outputs"] = {{"value", value}};
    const bool singular = std::isinf(value);
    if (singular) j["diagnostics"]["singular"] = true;
    write_text(cfg.out, j.dump(2) + "\n");
    return singular ? 2 : 0;
}

int run_verify_poly(const RunConfig& cfg) {
    std::ostringstream csv;
    csv << csv_header("verify-poly", 1);
    csv << "N,m,basis_index,annulus_residual,deficit_residual\n";
    bool ok = true;
    const double eps = 0.1;
    for (int m = 0; m <= cfg.m_max; ++m) {
        const auto basis = harmonics::harmonic_basis(cfg.N, m);
        if (static_cast<long>(basis.size()) != harmonics::harmonic_dim(cfg.N, m))
            ok = false;
        Point x = Point::zero(cfg.N);
        for (int i = 0; i < cfg.N; ++i) x.coords[i] = 0.3 + 0.2 * i;
        const FracOrder order(cfg.N, std::min(cfg.s, 0.999));
        for (size_t i = 0; i < basis.size(); ++i) {
            const double res =
                harmonics::annulus_frac_lap_poly(order, basis[i], x, eps);
            const double deficit =
                harmonics::spherical_average_deficit(basis[i], x, 1.5);
            if (res != 0.0 || deficit != 0.0) ok = false;
            csv << cfg.N << "," << m << "," << i << "," << (res == 0.0 ? 0.0 : res)
                << "," << (deficit == 0.0 ? 0.0 : deficit) << "\n";
        }
    }
    write_text(cfg.out, csv.str());
    return ok ? 0 : 2;
}

int run_verify_identity(const RunConfig& cfg) {
    const FracOrder order(cfg.N, cfg.s);
    BumpSpec bump;
    bump.center = Point::zero(cfg.N);
    bump.radius = cfg.r;
    const TestFunction phi = identities::make_test_function(order, bump);
    IdentityReport rep;
    if (cfg.identity == "ps")
        rep = identities::check_identity_ps(order, phi);
    else if (cfg.identity == "qs")
        rep = identities::check_identity_qs(order, phi, cfg.cs_mode);
    else if (cfg.identity == "rs")
        rep = identities::check_identity_rs(order, phi);
    else
        throw CLI::ValidationError("identity", "unknown identity: " + cfg.identity);

    json j = base_report("verify-identity");
    j["inputs"] = {{"N", cfg.N},
                   {"s", cfg.s},
                   {"identity", cfg.identity},
                   {"bump_radius", cfg.r},
                   {"cs_mode", rep.constant_mode},
                   {"tol", cfg.tol}};
    j["outputs"] = {{"lhs", rep.lhs},
                    {"rhs", rep.rhs},
                    {"abs_gap", rep.abs_gap},
                    {"rel_gap", rep.rel_gap}};
    j["diagnostics"] = {{"inner_budget", rep.inner_budget},
                        {"outer_nodes", rep.outer_nodes}};
    if (cfg.identity == "qs") {
        // both constants are always surfaced
        const Constants c = special::constants_for(order);
        j["diagnostics"]["C_s_derived"] = c.C_s_derived;
        j["diagnostics"]["C_s_paper"] = c.C_s_paper;
    }
    const bool pass = rep.rel_gap <= cfg.tol;
    j["outputs"]["pass"] = pass;
    write_text(cfg.out, j.dump(2) + "\n");
    return pass ? 0 : 1;
}

int run_converge(const RunConfig& cfg) {
    const FracOrder order(cfg.N, cfg.s);
    std::vector<double> grid = cfg.eps_grid;
    if (grid.empty()) grid = {1e-1, 1e-2, 1e-3, 1e-4};
    Box box;
    if (!cfg.box_lo.empty()) {
        box.lo = cfg.box_lo;
        box.hi = cfg.box_hi;
    } else {
        box.lo.assign(cfg.N, -1.0);
        box.hi.assign(cfg.N, 1.0);
        box.lo[0] = 0.5;
        box.hi[0] = 2.0;
    }
    limits::StudyOptions opt;
    opt.lattice_per_axis = cfg.grid;
    opt.jobs = cfg.jobs;
    ConvergenceStudy st;
    if (cfg.study == "green")
        st = limits::green_limit_study(order, grid, box, opt);
    else if (cfg.study == "poisson")
        st = limits::poisson_limit_study(order, grid, box, opt);
    else if (cfg.study == "layer-mu")
        st = limits::boundary_layer_study(order, limits::Layer::mu, grid, box, opt);
    else if (cfg.study == "layer-nu")
        st = limits::boundary_layer_study(order, limits::Layer::nu, grid, box, opt);
    else
        throw CLI::ValidationError("--study", "unknown study: " + cfg.study);

    std::ostringstream csv;
    csv << csv_header("converge", 1);
    csv << "study,N,s,eps,sup_error,l1s_error,fitted_rate\n";
    csv.precision(12);
    for (size_t i = 0; i < st.eps_grid.size(); ++i) {
        csv << cfg.study << "," << cfg.N << "," << cfg.s << "," << st.eps_grid[i]
            << "," << st.sup_errors[i] << "," << st.l1s_errors[i] << ","
            << st.fitted_rate.slope << "\n";
    }
    write_text(cfg.out, csv.str());
    return 0;
}

int run_wos(const RunConfig& cfg) {
    const FracOrder order(cfg.N, cfg.s);
    WalkConfig wc;
    wc.n_walks = cfg.walks;
    wc.seed = cfg.seed;
    wc.jobs = cfg.jobs;
    wc.norm_check = true;
    const Point x = point_of(cfg.x, cfg.N, 1.0);
    // exterior datum: indicator of the box [box_lo, box_hi] when given,
    // otherwise g == 1 (total exit mass)
    std::function<double(const Point&)> g;
    const bool boxed = !cfg.box_lo.empty();
    if (boxed) {
        const std::vector<double> lo = cfg.box_lo, hi = cfg.box_hi;
        g = [lo, hi](const Point& p) {
            for (size_t i = 0; i < lo.size(); ++i)
                if (p[i] < lo[i] || p[i] > hi[i]) return 0.0;
            return 1.0;
        };
    } else {
        g = [](const Point&) { return 1.0; };
    }
    const WalkStats st = wos::wos_estimate(order, x, g, wc);
    json j = base_report("wos");
    j["inputs"] = {{"N", cfg.N},        {"s", cfg.s},   {"x", cfg.x},
                   {"walks", cfg.walks}, {"seed", cfg.seed},
                   {"box_lo", cfg.box_lo}, {"box_hi", cfg.box_hi}};
    j["outputs"] = {{"estimate", st.estimate},
                    {"std_error", st.std_error},
                    {"mean_steps", st.mean_steps},
                    {"capped_fraction", st.capped_fraction},
                    {"unit_mass", st.unit_mass}};
    if (st.capped_fraction > 0.01)
        j["diagnostics"]["bias_warning"] = "capped fraction above 1%";
    write_text(cfg.out, j.dump(2) + "\n");
    return st.capped_fraction > 0.01 ? 1 : 0;
}

} // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
    RunConfig cfg;
    CLI::App app{"fraclab: numerical laboratory for fractional harmonic kernels"};
    app.set_config("--config", "", "key=value configuration with [sections]");
    app.allow_config_extras(false);
    app.require_subcommand(1);

    auto* c_constants = app.add_subcommand("constants", "normalization constants");
    attach_common(c_constants, cfg);

    auto* c_eval = app.add_subcommand("eval", "principal-value evaluation");
    attach_common(c_eval, cfg);
    c_eval->add_option("--field", cfg.field, "cos|ps|qs|rs");
    c_eval->add_option("--x", cfg.x, "evaluation point");
    c_eval->add_option("--xi", cfg.xi, "frequency vector for the cosine field");
    c_eval->add_option("--eps", cfg.eps, "initial inner cutoff");
    c_eval->add_option("--R", cfg.R_outer, "outer radius (0 = tied to 1/eps)");
    c_eval->add_option("--tol", cfg.tol, "settling tolerance");

    auto* c_kernel = app.add_subcommand("kernel", "closed-form kernel evaluation");
    attach_common(c_kernel, cfg);
    c_kernel->add_option("--kernel", cfg.kernel, "kernel name");
    c_kernel->add_option("--x", cfg.x, "first point");
    c_kernel->add_option("--y", cfg.y, "second point");
    c_kernel->add_option("--r", cfg.r, "ball radius");
    c_kernel->add_option("--t", cfg.t, "layer depth");
    std::string norm = "probabilistic";
    c_kernel->add_option("--norm-mode", norm, "paper|probabilistic")
        ->check(CLI::IsMember({"paper", "probabilistic"}));

    auto* c_verify = app.add_subcommand("verify", "property verification");
    auto* c_poly = c_verify->add_subcommand("poly", "harmonic polynomial checks");
    attach_common(c_poly, cfg);
    c_poly->add_option("--m-max", cfg.m_max, "highest homogeneous degree");

    auto* c_ident = c_verify->add_subcommand("identity", "distributional identities");
    attach_common(c_ident, cfg);
    c_ident->add_option("--identity", cfg.identity, "ps|qs|rs");
    c_ident->add_option("--r", cfg.r, "bump radius");
    c_ident->add_option("--tol", cfg.tol, "pass tolerance on the relative gap");
    std::string csmode = "derived";
    c_ident->add_option("--cs-mode", csmode, "derived|paper")
        ->check(CLI::IsMember({"derived", "paper"}));

    auto* c_conv = app.add_subcommand("converge", "convergence studies");
    attach_common(c_conv, cfg);
    c_conv->add_option("--study", cfg.study, "green|poisson|layer-mu|layer-nu");
    c_conv->add_option("--eps", cfg.eps_grid, "decreasing parameter grid");
    c_conv->add_option("--box-lo", cfg.box_lo, "compact box lower corner");
    c_conv->add_option("--box-hi", cfg.box_hi, "compact box upper corner");
    c_conv->add_option("--grid", cfg.grid, "lattice points per axis");

    auto* c_wos = app.add_subcommand("wos", "walk-on-spheres estimates");
    attach_common(c_wos, cfg);
    c_wos->add_option("--x", cfg.x, "start point");
    c_wos->add_option("--walks", cfg.walks, "number of walks");
    auto* seed_opt = c_wos->add_option("--seed", cfg.seed, "random seed");
    c_wos->add_option("--box-lo", cfg.box_lo, "indicator box lower corner");
    c_wos->add_option("--box-hi", cfg.box_hi, "indicator box upper corner");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        throw HelpRequested();
    } catch (const CLI::CallForAllHelp& e) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        throw HelpRequested();
    }

    if (c_constants->parsed()) cfg.task = Task::constants;
    if (c_eval->parsed()) cfg.task = Task::eval;
    if (c_kernel->parsed()) {
        cfg.task = Task::kernel;
        cfg.norm_mode = norm == "paper" ? NormMode::paper_K
                                        : NormMode::probabilistic_kappa;
    }
    if (c_poly->parsed()) cfg.task = Task::verify_poly;
    if (c_ident->parsed()) {
        cfg.task = Task::verify_identity;
        cfg.cs_mode = csmode == "paper" ? CsMode::paper : CsMode::derived;
    }
    if (c_conv->parsed()) cfg.task = Task::converge;
    if (c_wos->parsed()) {
        cfg.task = Task::wos;
        cfg.seed = env_seed_fallback(cfg.seed, seed_opt->count() > 0);
    }

    validate(cfg);
    return cfg;
}

int run_and_report(const RunConfig& cfg) {
    switch (cfg.task) {
        case Task::constants: return run_constants(cfg);
        case Task::eval: return run_eval(cfg);
        case Task::kernel: return run_kernel(cfg);
        case Task::verify_poly: return run_verify_poly(cfg);
        case Task::verify_identity: return run_verify_identity(cfg);
        case Task::converge: return run_converge(cfg);
        case Task::wos: return run_wos(cfg);
    }
    return 2;
}

} // namespace fraclab::cli
