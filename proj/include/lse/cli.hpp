// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace lse {

/// Exit statuses of the command line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,  ///< partition or checkpoint validation failed
  kExitConfig = 2,      ///< invalid configuration or arguments
  kExitIo = 3,          ///< unreadable input or unwritable output
  kExitFailure = 4,     ///< anything else
};

struct CliOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  int workers = 1;
  int verbosity = 0;
  /// Checkpoint of an earlier run to extend (run only).
  std::optional<std::string> resume;
  /// Geometry format override (extract only).
  std::optional<std::string> format;
  std::ostream* out = nullptr;  ///< defaults to std::cout
  std::ostream* err = nullptr;  ///< defaults to std::cerr
};

/// One run; writes checkpoint.json, ledger.json, levelset.{csv,obj} and
/// run.json into `out_dir`.
int cmd_run(const std::string& config_path, const CliOptions& opts);
/// Convergence sweep over L_range; writes sweep.csv and sweep.json.
int cmd_sweep(const std::string& config_path, const CliOptions& opts);
/// Geometry of a checkpoint; writes levelset.{csv,obj}.
int cmd_extract(const std::string& checkpoint_path, const CliOptions& opts);
/// Partition and approximant checks of a checkpoint; prints a report.
int cmd_validate(const std::string& checkpoint_path, const CliOptions& opts);

/// Argument parsing and dispatch for the `lse` executable.
int cli_main(int argc, const char* const* argv);

}  // namespace lse
