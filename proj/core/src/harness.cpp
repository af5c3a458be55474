#include "mblbfgs/harness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "mblbfgs/errors.hpp"
#include "mblbfgs/objective.hpp"

namespace mblbfgs {
namespace {

constexpr std::uint64_t kInitStream = 0x696e6974;  // "init"

RepetitionOutcome run_repetition(const ExperimentConfig& cfg, const Dataset& raw, std::size_t rep,
                                 const std::optional<PreparedData>& shared) {
  RepetitionOutcome out;
  out.index = rep;
  out.seed = repetition_seed(cfg.seed, rep);

  std::optional<PreparedData> own;
  if (!shared) own = prepare_data(raw, cfg.dataset, Rng(cfg.dataset.split_seed).split(rep).seed());
  const PreparedData& data = shared ? *shared : *own;
  out.split_fingerprint = data.fingerprint;

  const MlpSpec spec{data.train.feature_count(), cfg.model.hidden, static_cast<std::size_t>(raw.class_count),
                     cfg.model.activation};
  const MlpObjective objective(spec, data.train, data.validation, data.test);
  Rng init_rng = Rng(out.seed).split(kInitStream);
  const ParamVector theta0 = initial_parameters(spec, init_rng);
  const TrainingSettings settings = cfg.training_settings();

  std::vector<double> ccrs;
  bool all_completed = true;
  for (Method m : cfg.methods) {
    out.runs.push_back(train(objective, m, settings, theta0, out.seed));
    const auto& run = out.runs.back();
    all_completed = all_completed && !run.aborted;
    ccrs.push_back(run.final_ccr());
  }
  if (all_completed) out.ranks = rnk(ccrs);
  return out;
}

}  // namespace

PreparedData prepare_data(const Dataset& raw, const DatasetConfig& cfg, std::uint64_t split_seed) {
  const SplitIndices idx = split(raw, cfg.test_count, SplitSpec{cfg.validation_fraction, split_seed});
  const Dataset scaled = cfg.standardize ? standardize(raw, idx.train) : raw;
  PreparedData out{subset(scaled, idx.train), subset(scaled, idx.validation), subset(scaled, idx.test), 0};
  out.fingerprint = fingerprint(idx.test, fingerprint(idx.validation, fingerprint(idx.train)));
  return out;
}

std::uint64_t repetition_seed(std::uint64_t master_seed, std::size_t repetition) {
  return Rng(master_seed).split(repetition).seed();
}

AggregateTable monte_carlo(const ExperimentConfig& cfg, const Dataset& raw, std::size_t repetitions,
                           const RunObserver& observer) {
  if (repetitions < 1) throw ConfigError("repetitions: must be >= 1");
  validate(cfg);

  std::optional<PreparedData> shared;
  if (!cfg.resplit_per_repetition) shared = prepare_data(raw, cfg.dataset, cfg.dataset.split_seed);

  AggregateTable table;
  table.repetitions.resize(repetitions);

  const std::size_t workers = std::min(cfg.threads, repetitions);
  if (workers <= 1) {
    for (std::size_t r = 0; r < repetitions; ++r) table.repetitions[r] = run_repetition(cfg, raw, r, shared);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < repetitions; r = next++) {
          try {
            table.repetitions[r] = run_repetition(cfg, raw, r, shared);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
    MethodSummary summary;
    summary.method = cfg.methods[i];
    std::vector<double> ccrs;
    std::vector<double> ranks;
    for (const auto& rep : table.repetitions) {
      const auto& run = rep.runs[i];
      if (run.aborted) {
        ++summary.excluded;
      } else {
        ccrs.push_back(run.final_ccr());
      }
      if (!rep.ranks.empty()) ranks.push_back(rep.ranks[i]);
    }
    summary.completed = ccrs.size();
    summary.ccr = mean_std(ccrs);
    summary.rnk = mean_std(ranks);
    table.excluded_runs += summary.excluded;
    table.methods.push_back(summary);
  }
  table.ranked_repetitions = static_cast<std::size_t>(
      std::count_if(table.repetitions.begin(), table.repetitions.end(), [](const auto& r) { return !r.ranks.empty(); }));

  if (observer) {
    for (const auto& rep : table.repetitions) {
      for (const auto& run : rep.runs) observer(rep, run);
    }
  }
  return table;
}

}  // namespace mblbfgs
