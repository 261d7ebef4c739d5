#include "commands.hpp"
#include "config.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <exception>
#include <iostream>
#include <stdexcept>
#include <string>

namespace {

struct CliState {
    std::string config_path;
    std::uint64_t seed = 0;
    wdmcqf::cli::CommandOptions opt;
    int (*run)(const wdmcqf::cli::RunConfig&, const wdmcqf::cli::CommandOptions&) = nullptr;
};

void add_common_options(CLI::App* sub, CliState& state) {
    sub->add_option("--config", state.config_path,
                    "Run configuration, INI or JSON (required)")
        ->required();
    sub->add_option("--out", state.opt.out_path, "Output file; '-' or omitted for stdout");
    sub->add_option("--format", state.opt.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", state.seed, "Override the Monte Carlo master seed");
    sub->add_option("--threads", state.opt.threads,
                    "Worker threads; 0 uses every hardware thread");
}

}  // namespace

int main(int argc, char** argv) {
    using namespace wdmcqf::cli;

    CLI::App app{
        "Analysis and simulation toolkit for wavelength-multiplexed coherent "
        "fingerprinting"};
    app.require_subcommand(1);

    CliState state;
    struct Entry {
        const char* name;
        const char* help;
        int (*run)(const RunConfig&, const CommandOptions&);
    };
    const Entry entries[] = {
        {"optimize", "Minimize the mean photon number for one operating point",
         &cmd_optimize},
        {"sweep", "Tabulate cost and advantage ratios over an (n, k, distance) grid",
         &cmd_sweep},
        {"simulate", "Run Monte Carlo protocol trials and summarize the verdicts",
         &cmd_simulate},
        {"plan-fiber", "Check the dispersion timing plan for a channel grid",
         &cmd_plan_fiber},
        {"table1", "Recompute cost and advantage for the published reference rows",
         &cmd_table1},
    };
    for (const Entry& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        add_common_options(sub, state);
        sub->callback([&state, run = e.run] { state.run = run; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        if (sub->count("--seed") > 0) state.opt.seed_override = state.seed;
        RunConfig cfg = load_config(state.config_path);
        return state.run(cfg, state.opt);
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
