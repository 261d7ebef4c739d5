#pragma once

#include "config.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace wdmcqf::cli {

// Options shared by every subcommand. `format` empty means "use the
// subcommand's default" (json for optimize/simulate/plan-fiber, csv for
// sweep/table1). `threads == 0` means "use every hardware thread".
struct CommandOptions {
    std::string out_path;  // empty or "-" writes to stdout
    std::string format;
    std::optional<std::uint64_t> seed_override;
    unsigned threads = 0;
};

// Each command returns the process exit code:
//   0 success, 2 infeasible operating point / failed physical plan.
// Bad inputs surface as std::invalid_argument (exit 1) and guard violations
// as std::domain_error (exit 3); main() maps the exceptions.
int cmd_optimize(const RunConfig& cfg, const CommandOptions& opt);
int cmd_sweep(const RunConfig& cfg, const CommandOptions& opt);
int cmd_simulate(const RunConfig& cfg, const CommandOptions& opt);
int cmd_plan_fiber(const RunConfig& cfg, const CommandOptions& opt);
int cmd_table1(const RunConfig& cfg, const CommandOptions& opt);

}  // namespace wdmcqf::cli
