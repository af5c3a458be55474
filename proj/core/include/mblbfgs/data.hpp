#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mblbfgs/model.hpp"
#include "mblbfgs/numeric.hpp"

namespace mblbfgs {

/// Tabular classification data. Labels are contiguous in [0, class_count).
struct Dataset {
  Matrix features;
  std::vector<int> labels;
  int class_count = 0;
  std::string name;
  std::vector<std::string> class_names;

  std::size_t rows() const noexcept { return labels.size(); }
  std::size_t feature_count() const noexcept { return features.cols(); }
};

struct CsvOptions {
  char delimiter = ',';
  bool header = true;
  /// Column holding the class label, by header name or zero-based index.
  /// Negative indices count from the end (-1 is the last column).
  std::variant<long, std::string> label_column = -1L;
};

/// Parses a delimited file. Labels are re-indexed in order of first appearance.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Copies the given rows into a model batch.
Batch gather(const Dataset& ds, std::span<const std::size_t> rows);

/// Copies the given rows into a new dataset with the same class set.
Dataset subset(const Dataset& ds, std::span<const std::size_t> rows);

/// Per-feature affine rescaling fitted on a row subset.
struct Standardizer {
  std::vector<double> means;
  std::vector<double> scales;  // 0 marks a constant feature

  static Standardizer fit(const Dataset& ds, std::span<const std::size_t> rows);
  Dataset apply(const Dataset& ds) const;
};

/// Zero-mean, unit-variance features using statistics of `train_rows` only.
/// Constant features map to 0.
Dataset standardize(const Dataset& ds, std::span<const std::size_t> train_rows);

struct SplitSpec {
  double validation_fraction = 0.1;
  std::uint64_t split_seed = 0;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

/// Shuffles rows by the split seed; the first `test_count` go to test and
/// floor(validation_fraction * rest) of the remainder to validation.
SplitIndices split(const Dataset& ds, std::size_t test_count, const SplitSpec& spec);

/// Isotropic unit-variance Gaussian clusters with centres drawn uniformly
/// in [-separation, separation]^n.
Dataset synth_gaussian_blobs(int classes, std::size_t per_class, std::size_t n, double separation,
                             std::uint64_t seed);

/// Order-sensitive FNV-1a hash of index lists; used to compare data exposure.
std::uint64_t fingerprint(std::span<const std::size_t> indices, std::uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace mblbfgs
