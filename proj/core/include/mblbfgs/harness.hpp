#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mblbfgs/config.hpp"
#include "mblbfgs/data.hpp"
#include "mblbfgs/metrics.hpp"
#include "mblbfgs/optimizers.hpp"

namespace mblbfgs {

/// A split, optionally standardized with train-only statistics.
struct PreparedData {
  Dataset train;
  Dataset validation;
  Dataset test;
  std::uint64_t fingerprint = 0;  // hash of the split indices
};

PreparedData prepare_data(const Dataset& raw, const DatasetConfig& cfg, std::uint64_t split_seed);

struct RepetitionOutcome {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::uint64_t split_fingerprint = 0;
  std::vector<RunResult> runs;        // one per configured method, same order
  std::vector<double> ranks;          // empty if any run in this repetition aborted
};

struct MethodSummary {
  Method method = Method::mb;
  MeanStd ccr;
  MeanStd rnk;
  std::size_t completed = 0;
  std::size_t excluded = 0;  // aborted runs left out of the CCR statistics
};

struct AggregateTable {
  std::vector<MethodSummary> methods;
  std::vector<RepetitionOutcome> repetitions;
  std::size_t excluded_runs = 0;
  std::size_t ranked_repetitions = 0;
};

/// Seed of one repetition, derived from the master seed.
std::uint64_t repetition_seed(std::uint64_t master_seed, std::size_t repetition);

/// Called once per finished run, in (repetition, method) order.
using RunObserver = std::function<void(const RepetitionOutcome&, const RunResult&)>;

/// Runs every configured method `repetitions` times. Within a repetition all
/// methods see the same split and start from the same initial parameters.
/// Repetitions run on up to config.threads threads; results do not depend
/// on the thread count.
AggregateTable monte_carlo(const ExperimentConfig& config, const Dataset& raw, std::size_t repetitions,
                           const RunObserver& observer = {});

}  // namespace mblbfgs
