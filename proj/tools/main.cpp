#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "tatlab/experiments.hpp"
#include "tatlab/scenario.hpp"
#include "tatlab/toml_lite.hpp"

namespace {

struct CommonArgs {
    std::string scenario_file;
    std::string output_dir = "out";
    int workers = -1;  // -1: use the scenario's value
};

int run_one(const std::string& subcommand, const CommonArgs& args) {
    tatlab::Scenario sc = tatlab::load_scenario_file(args.scenario_file);
    if (args.workers >= 0) sc.workers = args.workers;

    std::string out_dir = args.output_dir;
    if (const char* env = std::getenv("TATLAB_OUTPUT_DIR"); env && *env) out_dir = env;

    const auto written = tatlab::execute_and_write(subcommand, sc, out_dir);
    for (const auto& path : written) std::cout << path << "\n";
    return 0;
}

int run_validate(const CommonArgs& args) {
    const auto report = tatlab::validate_scenario_file(args.scenario_file);
    if (report.ok()) {
        std::cout << "ok: no violations\n";
        return 0;
    }
    std::cout << report.violations.size() << " violation(s):\n";
    for (const auto& v : report.violations) std::cout << "  - " << v << "\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tatlab: price-adjustment dynamics laboratory"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string pending;

    auto add_common = [&args](CLI::App* cmd) {
        cmd->add_option("scenario", args.scenario_file, "scenario TOML file")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option("-o,--output-dir", args.output_dir,
                        "output directory (TATLAB_OUTPUT_DIR overrides)");
        cmd->add_option("--workers", args.workers,
                        "worker threads (never affects results; 0 = hardware)");
    };

    for (const auto& name : tatlab::experiment_names()) {
        CLI::App* cmd = app.add_subcommand(name, "run the " + name + " experiment");
        add_common(cmd);
        cmd->callback([&pending, name]() { pending = name; });
    }
    CLI::App* validate = app.add_subcommand("validate", "check a scenario without executing");
    validate->add_option("scenario", args.scenario_file, "scenario TOML file")
        ->required()
        ->check(CLI::ExistingFile);
    validate->callback([&pending]() { pending = "validate"; });

    try {
        app.parse(argc, argv);
        if (pending == "validate") return run_validate(args);
        return run_one(pending, args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const tatlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const tatlab::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const tatlab::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
