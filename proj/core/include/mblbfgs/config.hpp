#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "mblbfgs/model.hpp"
#include "mblbfgs/optimizers.hpp"

namespace mblbfgs {

struct DatasetConfig {
  std::filesystem::path path;
  std::variant<long, std::string> label_column = -1L;
  char delimiter = ',';
  bool header = true;
  std::size_t test_count = 0;
  double validation_fraction = 0.1;
  std::uint64_t split_seed = 0;
  bool standardize = true;
};

struct ModelConfig {
  std::size_t hidden = 35;
  Activation activation = Activation::tanh;
};

struct OutputConfig {
  std::filesystem::path directory = "out";
  std::size_t trace_every = 1;  // keep every n-th iteration row (the last row is always kept)
  bool traces = true;
  bool record_test_metrics = true;
};

/// Everything needed to reproduce a set of training runs. Defaults follow
/// the common hyperparameter row: alpha=2, m0=1, m_max=32, m_val=5,
/// m_reset=8, m_bar=10.
struct ExperimentConfig {
  DatasetConfig dataset;
  ModelConfig model;
  std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
  LbfgsSettings lbfgs;
  AdamSettings adam;
  std::uint64_t seed = 0;
  std::size_t repetitions = 1;
  std::size_t threads = 1;
  bool resplit_per_repetition = false;
  OutputConfig output;

  TrainingSettings training_settings() const;
};

/// Parses a config document. Relative paths resolve against `base_dir`.
/// Unknown keys are rejected, except a top-level "manifest" section, which
/// is ignored.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// Reads and parses a JSON config file. Throws IoError if it cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError naming the first invalid field.
void validate(const ExperimentConfig& config);

nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace mblbfgs
