#pragma once

#include <ostream>

#include "coexist/config.hpp"

namespace coexist {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitHypothesesFail = 1,
    kExitConfigError = 2,
    kExitIoError = 3,
};

int cmd_find_orbits(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_check_theory(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_manifolds(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_basins(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Dispatches on config.command.
int run_command(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Full command line: subcommand, --config, --out, --threads, --resolution.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace coexist
