#ifndef VIRODYN_CLI_COMMANDS_HPP
#define VIRODYN_CLI_COMMANDS_HPP

#include "config.hpp"

namespace virodyn::cli {

// Each command reads its settings from the (already merged) config,
// writes CSV/JSON outputs plus a manifest into the config's "output"
// directory, and returns the process exit code (0 on success). Config
// problems surface as ConfigError; numerical failures as
// IntegrationError or std::runtime_error.
int cmd_simulate(const json& cfg);
int cmd_equilibria(const json& cfg);
int cmd_region(const json& cfg);
int cmd_branch(const json& cfg);
int cmd_hopf_curve(const json& cfg);
int cmd_cycles(const json& cfg);
int cmd_protocol(const json& cfg);
int cmd_dosage_sweep(const json& cfg);
int cmd_basin(const json& cfg);

/// Runs the whole analysis suite with built-in configurations, one
/// subdirectory of `out_dir` per analysis.
int cmd_repro(const std::string& out_dir);

}  // namespace virodyn::cli

#endif
