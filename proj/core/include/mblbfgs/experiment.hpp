#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

namespace mblbfgs {

enum class ExitCode : int { success = 0, config_error = 1, runtime_abort = 2, io_error = 3 };

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output_directory;
  bool dry_run = false;
};

/// Loads a config, runs the Monte Carlo suite it describes and writes
///   <out>/manifest.json     resolved config plus derived seeds
///   <out>/aggregate.json    per-method CCR/RNK mean and std
///   <out>/traces/<method>_rep<NNN>.csv
/// Errors are reported on `err` and mapped to exit codes. Aborted runs are
/// excluded from the aggregates; the exit code is runtime_abort only when
/// some method has no completed run at all.
ExitCode run_experiment(const std::filesystem::path& config_path, const RunOverrides& overrides, std::ostream& out,
                        std::ostream& err);

}  // namespace mblbfgs
