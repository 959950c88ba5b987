// modalres command-line driver.
//
//   modalres <scan|classify|witness|simulate|abscissa|certify> --config job.json [--out DIR]
//
// Exit status: 0 success, 2 invalid configuration, 3 computation error.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "modalres/io.hpp"

namespace {

int execute(modalres::Command command, const std::string& config_path, const std::string& out_dir, bool quiet) {
    using namespace modalres;
    JobConfig cfg;
    try {
        cfg = load_config(config_path, command);
    } catch (const ConfigError& e) {
        std::cerr << "modalres: " << config_path;
        if (e.line() > 0) std::cerr << ":" << e.line();
        if (!e.pointer().empty()) std::cerr << " (" << e.pointer() << ")";
        // what() is prefixed with the stage name; the location says enough here.
        std::string msg = e.what();
        const std::string prefix = e.where() + ": ";
        if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
        std::cerr << ": " << msg << "\n";
        return 2;
    }
    try {
        const RunResult result = run(cfg);
        write_outputs(result, out_dir);
        if (!quiet) {
            std::cout << result.console;
            std::cout << result.report["results"].dump(2) << "\n";
        }
    } catch (const Error& e) {
        std::cerr << "modalres: " << to_string(command) << " failed in " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "modalres: " << to_string(command) << " failed: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resolvent, regularity and decay analysis of coupled damped modal systems"};
    app.set_version_flag("--version", std::string(modalres::version()));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    bool quiet = false;

    const char* descriptions[][2] = {
        {"scan", "sample the resolvent norm along the imaginary axis and fit its growth"},
        {"classify", "print the regularity and stability regime for theta"},
        {"witness", "build explicit quasi-modes and their residuals"},
        {"simulate", "evolve modal initial data and track the energy"},
        {"abscissa", "largest real part of the modal spectra"},
        {"certify", "check witness lower bounds against computed resolvent norms"},
    };
    for (const auto& d : descriptions) {
        CLI::App* sub = app.add_subcommand(d[0], d[1]);
        sub->add_option("-c,--config", config_path, "JSON job file")->required()->check(CLI::ExistingFile);
        sub->add_option("-o,--out", out_dir, "output directory");
        sub->add_flag("-q,--quiet", quiet, "do not print results");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    return execute(*modalres::parse_command(name), config_path, out_dir, quiet);
}
