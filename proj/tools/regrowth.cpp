#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "regrowth/commands.hpp"
#include "regrowth/io.hpp"

using namespace regrowth;

int main(int argc, char** argv) {
    CLI::App app{"Risk-sensitive regime-switching growth model solver"};
    app.set_version_flag("--version", std::string(version()));
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool force = false;
    app.add_option("--config", config_path, "configuration file (defaults apply when omitted)")
        ->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (overrides output.directory)");
    app.add_option("--seed", seed, "simulation seed (overrides simulation.seed)");
    app.add_flag("--force", force, "run even when the model assumptions fail");

    app.add_subcommand("check", "report the model assumption constants");
    app.add_subcommand("solve", "value iteration; writes value, policy and report tables");
    app.add_subcommand("euler", "Euler equation residuals of the solved policy");
    app.add_subcommand("simulate", "simulate the controlled chain and check the drift condition");
    app.add_subcommand("plot", "render value and investment-ratio plots from solve outputs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
        if (seed) config.simulation.seed = *seed;
        if (!out_dir.empty()) config.output.directory = out_dir;
        config.validate();
        const CommandOptions options{config.output.directory, force};

        const std::string command = app.get_subcommands().front()->get_name();
        if (command == "check") return cmd_check(config, options, std::cout);
        if (command == "solve") return cmd_solve(config, options, std::cout);
        if (command == "euler") return cmd_euler(config, options, std::cout);
        if (command == "simulate") return cmd_simulate(config, options, std::cout);
        return cmd_plot(config, options, std::cout);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
