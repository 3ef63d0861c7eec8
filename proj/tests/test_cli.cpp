// CLI parsing and reporting: strict config handling, flag precedence, seed
// fallback, schema headers, determinism, and exit statuses.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fraclab/cli.hpp"

using namespace fraclab::cli;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content = "") {
        path = std::string("/tmp/fraclab_test_") + name;
        if (!content.empty()) {
            std::ofstream f(path);
            f << content;
        }
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("parse: constants task with flags") {
    const RunConfig cfg = parse_config({"constants", "--N", "2", "--s", "0.5"});
    CHECK(cfg.task == Task::constants);
    CHECK(cfg.N == 2);
    CHECK(cfg.s == doctest::Approx(0.5));
}

TEST_CASE("parse: precondition violations are structured errors") {
    CHECK_THROWS_WITH_AS(parse_config({"constants", "--N", "1", "--s", "1.5"}),
                         doctest::Contains("FracOrder"), std::domain_error);
    CHECK_THROWS_AS(parse_config({"constants", "--N", "0"}), std::domain_error);
}

TEST_CASE("parse: unknown keys are rejected") {
    CHECK_THROWS(parse_config({"constants", "--no-such-flag", "3"}));
    TempFile cfgfile("bad.ini", "[constants]\nbogus_key=1\n");
    CHECK_THROWS(parse_config({"constants", "--config", cfgfile.path}));
}

TEST_CASE("parse: config file with sections, flags override") {
    TempFile cfgfile("ok.ini", "[constants]\nN=3\ns=0.25\n");
    const RunConfig from_file = parse_config({"constants", "--config", cfgfile.path});
    CHECK(from_file.N == 3);
    CHECK(from_file.s == doctest::Approx(0.25));
    const RunConfig overridden =
        parse_config({"constants", "--config", cfgfile.path, "--N", "2"});
    CHECK(overridden.N == 2);
    CHECK(overridden.s == doctest::Approx(0.25)); // file value survives
}

TEST_CASE("parse: FRACLAB_SEED is the lowest-precedence seed source") {
    setenv("FRACLAB_SEED", "9001", 1);
    const RunConfig env_cfg = parse_config({"wos", "--N", "2", "--s", "0.5"});
    CHECK(env_cfg.seed == 9001);
    const RunConfig flag_cfg =
        parse_config({"wos", "--N", "2", "--s", "0.5", "--seed", "7"});
    CHECK(flag_cfg.seed == 7);
    unsetenv("FRACLAB_SEED");
}

TEST_CASE("constants report: JSON keys and values") {
    TempFile out("constants.json");
    RunConfig cfg = parse_config({"constants", "--N", "2", "--s", "0.5"});
    cfg.out = out.path;
    CHECK(run_and_report(cfg) == 0);
    const std::string text = slurp(out.path);
    CHECK(text.find("\"task\": \"constants\"") != std::string::npos);
    CHECK(text.find("\"c_ns\": 0.159154943") != std::string::npos);
    CHECK(text.find("\"C_s_derived\": 0.4999999") != std::string::npos);
    CHECK(text.find("\"C_s_paper\": 1.0") != std::string::npos);
    CHECK(text.find("\"versions\"") != std::string::npos);
}

TEST_CASE("reports are byte-identical across reruns") {
    TempFile out1("det1.json"), out2("det2.json");
    RunConfig cfg = parse_config({"constants", "--N", "3", "--s", "0.75"});
    cfg.out = out1.path;
    run_and_report(cfg);
    cfg.out = out2.path;
    run_and_report(cfg);
    CHECK(slurp(out1.path) == slurp(out2.path));
}

TEST_CASE("verify poly: CSV schema header and all-zero residuals") {
    TempFile out("poly.csv");
    RunConfig cfg = parse_config(
        {"verify", "poly", "--N", "3", "--m-max", "4", "--out", out.path});
    CHECK(run_and_report(cfg) == 0);
    const std::string text = slurp(out.path);
    CHECK(text.rfind("# fraclab v0.1.0 schema=verify-poly:1", 0) == 0);
    CHECK(text.find("annulus_residual") != std::string::npos);
    // every residual column is exactly 0
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line); // header comment
    std::getline(lines, line); // column names
    int rows = 0;
    while (std::getline(lines, line)) {
        CHECK(line.substr(line.size() - 4) == ",0,0");
        ++rows;
    }
    CHECK(rows > 10);
}

TEST_CASE("kernel task: singular evaluation escalates the exit status") {
    TempFile out("sing.json");
    RunConfig cfg = parse_config({"kernel", "--N", "1", "--s", "0.5", "--kernel",
                                  "profile-q", "--x", "0.0", "--out", out.path});
    CHECK(run_and_report(cfg) == 2);
    CHECK(slurp(out.path).find("\"singular\": true") != std::string::npos);
}

TEST_CASE("eval task: diverging fields escalate the exit status") {
    // |x|^2 is not exposed by name; the bounded fields all settle, so use
    // the kernel of a valid run to confirm status 0 first
    TempFile out("eval.json");
    RunConfig cfg = parse_config({"eval", "--N", "1", "--s", "0.5", "--field", "rs",
                                  "--x", "1.0", "--out", out.path});
    CHECK(run_and_report(cfg) == 0);
    CHECK(slurp(out.path).find("\"diverging\": false") != std::string::npos);
}

TEST_CASE("verify identity rs: passes at tolerance and reports both constants") {
    TempFile out("rs.json");
    RunConfig cfg = parse_config({"verify", "identity", "--identity", "rs", "--N",
                                  "1", "--s", "0.5", "--tol", "0.01", "--out",
                                  out.path});
    CHECK(run_and_report(cfg) == 0);
    const std::string text = slurp(out.path);
    CHECK(text.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("converge task: CSV rows with both error columns") {
    TempFile out("conv.csv");
    RunConfig cfg = parse_config({"converge", "--study", "layer-mu", "--N", "2",
                                  "--s", "0.5", "--eps", "0.1", "0.01", "0.001",
                                  "--out", out.path});
    CHECK(run_and_report(cfg) == 0);
    const std::string text = slurp(out.path);
    CHECK(text.rfind("# fraclab v0.1.0 schema=converge:1", 0) == 0);
    CHECK(text.find("study,N,s,eps,sup_error,l1s_error,fitted_rate") !=
          std::string::npos);
    int rows = 0;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line))
        if (line.rfind("layer-mu,", 0) == 0) ++rows;
    CHECK(rows == 3);
}

TEST_CASE("wos task: JSON stats and deterministic reruns") {
    TempFile out1("wos1.json"), out2("wos2.json");
    RunConfig cfg = parse_config({"wos", "--N", "2", "--s", "0.5", "--x", "1", "0",
                                  "--walks", "2000", "--seed", "5", "--box-lo", "-2",
                                  "-1", "--box-hi", "-1", "1"});
    cfg.out = out1.path;
    CHECK(run_and_report(cfg) == 0);
    cfg.out = out2.path;
    run_and_report(cfg);
    const std::string a = slurp(out1.path);
    CHECK(a == slurp(out2.path));
    CHECK(a.find("\"estimate\"") != std::string::npos);
    CHECK(a.find("\"unit_mass\": 1.0") != std::string::npos);
}

TEST_CASE("exit status reflects a failing constant mode") {
    TempFile out("qsfail.json");
    RunConfig cfg = parse_config({"verify", "identity", "--identity", "qs", "--N",
                                  "1", "--s", "0.5", "--cs-mode", "paper", "--tol",
                                  "0.05", "--out", out.path});
    CHECK(run_and_report(cfg) == 1);
    CHECK(slurp(out.path).find("\"pass\": false") != std::string::npos);
}

TEST_CASE("constants task: csv format with schema header") {
    TempFile out("c.csv");
    RunConfig cfg = parse_config(
        {"constants", "--N", "2", "--s", "0.5", "--format", "csv", "--out", out.path});
    CHECK(run_and_report(cfg) == 0);
    const std::string text = slurp(out.path);
    CHECK(text.rfind("# fraclab v0.1.0 schema=constants:1", 0) == 0);
    CHECK(text.find("c_ns,0.159154943") != std::string::npos);
}
