/// @file cli.hpp
/// @brief Batch front end: argument/config parsing into a validated
///        RunConfig, experiment orchestration, CSV/JSON reporting.

#ifndef FRACLAB_CLI_HPP
#define FRACLAB_CLI_HPP

#include <cstdint>
#include <exception>
#include <string>
#include <vector>

#include "fraclab/kernels.hpp"
#include "fraclab/identities.hpp"

namespace fraclab::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Raised after a help request has been printed; the caller exits cleanly.
struct HelpRequested : std::exception {
    const char* what() const noexcept override { return "help requested"; }
};

enum class Task {
    constants,
    eval,
    kernel,
    verify_poly,
    verify_identity,
    converge,
    wos,
};

/// Fully validated run description.  Every numeric field is checked against
/// the module preconditions before any computation starts; flags override
/// config-file values, and FRACLAB_SEED is the lowest-precedence seed
/// source.
struct RunConfig {
    Task task = Task::constants;
    int N = 1;
    double s = 0.5;

    // task-specific block
    std::string field = "cos";      // eval: cos|ps|qs|rs
    std::string kernel = "fundamental"; // kernel: green-ball|green-halfspace|
                                        // poisson-ball|poisson-halfspace|
                                        // fundamental|profile-q|profile-r|
                                        // superposition-mu|superposition-nu
    std::string study = "green";    // converge: green|poisson|layer-mu|layer-nu
    std::string identity = "rs";    // verify identity: ps|qs|rs
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> xi;
    double r = 1.0;
    double t = 1.0;
    double eps = 0.25;
    double R_outer = 0.0;
    std::vector<double> eps_grid;
    std::vector<double> box_lo, box_hi;
    int m_max = 6;
    double tol = 0.05;
    long walks = 100000;
    std::uint64_t seed = 1;
    int grid = 33;
    int jobs = 1;
    NormMode norm_mode = NormMode::probabilistic_kappa;
    CsMode cs_mode = CsMode::derived;
    std::string out;                // empty: stdout
    std::string format = "json";    // json|csv
};

/// Parse command-line style arguments (argv without the program name).
/// Accepts --config <file> with bracketed-section key=value documents;
/// command-line flags take precedence, unknown keys are rejected with the
/// offending key named.
RunConfig parse_config(const std::vector<std::string>& args);

/// Execute the run and write the report(s).  Returns the process exit
/// status: 0 iff every check stayed within tolerance and no computation
/// raised a divergence or singularity flag.
int run_and_report(const RunConfig& cfg);

} // namespace fraclab::cli

#endif
