#include "mblbfgs/experiment.hpp"

#include <cstdio>
#include <ostream>

#include "mblbfgs/config.hpp"
#include "mblbfgs/data.hpp"
#include "mblbfgs/errors.hpp"
#include "mblbfgs/harness.hpp"
#include "mblbfgs/trace.hpp"

namespace mblbfgs {
namespace {

std::filesystem::path trace_path(const std::filesystem::path& dir, const RunResult& run, std::size_t rep) {
  char name[64];
  std::snprintf(name, sizeof name, "%s_rep%03zu.csv", std::string(to_string(run.method)).c_str(), rep);
  return dir / "traces" / name;
}

void print_summary(std::ostream& out, const AggregateTable& table) {
  char line[160];
  std::snprintf(line, sizeof line, "%-8s %16s %14s %10s\n", "method", "CCR mean(std)", "RNK mean(std)", "excluded");
  out << line;
  for (const auto& m : table.methods) {
    std::snprintf(line, sizeof line, "%-8s %9.1f(%5.1f) %8.2f(%4.2f) %10zu\n",
                  std::string(to_string(m.method)).c_str(), m.ccr.mean, m.ccr.std, m.rnk.mean, m.rnk.std,
                  m.excluded);
    out << line;
  }
}

}  // namespace

ExitCode run_experiment(const std::filesystem::path& config_path, const RunOverrides& overrides, std::ostream& out,
                        std::ostream& err) {
  ExperimentConfig cfg;
  Dataset raw;
  try {
    cfg = load_config(config_path);
    if (overrides.seed) cfg.seed = *overrides.seed;
    if (overrides.output_directory) cfg.output.directory = std::filesystem::absolute(*overrides.output_directory);
    if (cfg.dataset.path.empty()) throw ConfigError("dataset.path: required");
    validate(cfg);
    raw = load_csv(cfg.dataset.path, CsvOptions{cfg.dataset.delimiter, cfg.dataset.header, cfg.dataset.label_column});

    // Catch size errors (batch larger than the training split, ...) before compute.
    const PreparedData probe = prepare_data(raw, cfg.dataset, cfg.dataset.split_seed);
    const MlpSpec spec{probe.train.feature_count(), cfg.model.hidden, static_cast<std::size_t>(raw.class_count),
                       cfg.model.activation};
    const MlpObjective objective(spec, probe.train, probe.validation, probe.test);
    for (Method m : cfg.methods) validate_settings(m, cfg.training_settings(), objective);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return ExitCode::config_error;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return ExitCode::config_error;
  } catch (const IoError& e) {
    err << e.what() << "\n";
    return ExitCode::io_error;
  }

  nlohmann::json manifest = to_json(cfg);
  nlohmann::json seeds = nlohmann::json::array();
  for (std::size_t r = 0; r < cfg.repetitions; ++r) seeds.push_back(repetition_seed(cfg.seed, r));
  manifest["manifest"] = {{"dataset_rows", raw.rows()},
                          {"features", raw.feature_count()},
                          {"classes", raw.class_names},
                          {"repetition_seeds", seeds}};

  if (overrides.dry_run) {
    out << manifest.dump(2) << "\n";
    return ExitCode::success;
  }

  const auto& dir = cfg.output.directory;
  std::size_t aborted = 0;
  bool every_method_completed = true;
  try {
    std::vector<std::string> trace_errors;
    const AggregateTable table = monte_carlo(cfg, raw, cfg.repetitions, [&](const RepetitionOutcome& rep, const RunResult& run) {
      if (run.aborted) {
        ++aborted;
        err << to_string(run.method) << " repetition " << rep.index << " aborted: " << run.diagnostic << "\n";
      }
      if (cfg.output.traces && !run.history.empty()) {
        emit_trace(run.history, trace_path(dir, run, rep.index), cfg.output.trace_every);
      }
    });
    write_json(manifest, dir / "manifest.json");
    write_json(aggregate_to_json(table), dir / "aggregate.json");
    print_summary(out, table);
    for (const auto& m : table.methods) every_method_completed = every_method_completed && m.completed > 0;
  } catch (const IoError& e) {
    err << e.what() << "\n";
    return ExitCode::io_error;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return ExitCode::config_error;
  } catch (const Error& e) {
    err << "runtime error: " << e.what() << "\n";
    return ExitCode::runtime_abort;
  }

  if (aborted > 0) {
    err << aborted << " run(s) aborted and excluded from the aggregates\n";
    if (!every_method_completed) return ExitCode::runtime_abort;
  }
  return ExitCode::success;
}

}  // namespace mblbfgs
