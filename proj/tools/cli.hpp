#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace evfront::cli {

enum ExitCode { kOk = 0, kInternal = 1, kUsage = 2, kEmpty = 3 };

/// Runs one invocation. `args` excludes the program name. Normal output goes
/// to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Splices `key=value` lines from the file named by `--config` into `args`
/// right after the subcommand, so flags given on the command line win.
/// Throws std::invalid_argument on an unreadable file or malformed line.
std::vector<std::string> apply_config_overlay(const std::vector<std::string>& args);

}  // namespace evfront::cli
