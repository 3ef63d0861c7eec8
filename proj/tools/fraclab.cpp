// fraclab command-line front end.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "fraclab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const fraclab::cli::RunConfig cfg = fraclab::cli::parse_config(args);
        return fraclab::cli::run_and_report(cfg);
    } catch (const fraclab::cli::HelpRequested&) {
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "fraclab: " << e.what() << "\n";
        return 2;
    }
}
