#include "mblbfgs/data.hpp"

#include <cmath>
#include <charconv>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include "mblbfgs/errors.hpp"

namespace mblbfgs {
namespace {

std::vector<std::string> split_fields(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string current;
  for (char ch : line) {
    if (ch == delimiter) {
      fields.push_back(std::move(current));
      current.clear();
    } else if (ch != '\r') {
      current.push_back(ch);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\"");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\"");
  return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& text, double& value) {
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  return ec == std::errc() && ptr == end;
}

std::size_t resolve_label_column(const CsvOptions& options, const std::vector<std::string>& header,
                                 std::size_t columns, const std::string& where) {
  if (const auto* name = std::get_if<std::string>(&options.label_column)) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == *name) return i;
    }
    throw DataError(where + ": label column '" + *name + "' not found in header");
  }
  const long index = std::get<long>(options.label_column);
  const long resolved = index < 0 ? static_cast<long>(columns) + index : index;
  if (resolved < 0 || resolved >= static_cast<long>(columns)) {
    throw DataError(where + ": label column index " + std::to_string(index) + " out of range");
  }
  return static_cast<std::size_t>(resolved);
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("dataset not found: " + path.string());

  const std::string where = path.string();
  std::vector<std::string> header;
  std::vector<double> values;
  std::vector<int> labels;
  std::vector<std::string> class_names;
  std::unordered_map<std::string, int> class_index;
  std::size_t columns = 0;
  std::size_t label_col = 0;
  bool have_layout = false;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line, options.delimiter);

    if (!have_layout) {
      columns = fields.size();
      if (columns < 2) throw DataError(where + ":" + std::to_string(line_no) + ": need at least 2 columns");
      if (options.header) header = fields;
      label_col = resolve_label_column(options, header, columns, where);
      have_layout = true;
      if (options.header) continue;
    }

    if (fields.size() != columns) {
      throw DataError(where + ":" + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                      " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < columns; ++c) {
      const std::string field = trim(fields[c]);
      if (field.empty()) {
        throw DataError(where + ":" + std::to_string(line_no) + ": missing value in column " +
                        std::to_string(c));
      }
      if (c == label_col) {
        auto [it, inserted] = class_index.try_emplace(field, static_cast<int>(class_names.size()));
        if (inserted) class_names.push_back(field);
        labels.push_back(it->second);
        continue;
      }
      double v = 0.0;
      if (!parse_double(field, v) || !std::isfinite(v)) {
        throw DataError(where + ":" + std::to_string(line_no) + ": malformed value '" + field +
                        "' in column " + std::to_string(c));
      }
      values.push_back(v);
    }
  }

  if (labels.empty()) throw DataError(where + ": no data rows");
  if (class_names.size() < 2) throw DataError(where + ": need at least 2 classes, found " +
                                              std::to_string(class_names.size()));

  Dataset ds;
  ds.name = path.stem().string();
  ds.class_count = static_cast<int>(class_names.size());
  ds.class_names = std::move(class_names);
  ds.labels = std::move(labels);
  ds.features = Matrix(ds.labels.size(), columns - 1, std::move(values));
  return ds;
}

Batch gather(const Dataset& ds, std::span<const std::size_t> rows) {
  Batch batch{Matrix(rows.size(), ds.feature_count()), std::vector<int>(rows.size())};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = ds.features.row(rows[i]);
    std::copy(src.begin(), src.end(), batch.inputs.row(i).begin());
    batch.labels[i] = ds.labels[rows[i]];
  }
  return batch;
}

Dataset subset(const Dataset& ds, std::span<const std::size_t> rows) {
  Batch b = gather(ds, rows);
  Dataset out;
  out.features = std::move(b.inputs);
  out.labels = std::move(b.labels);
  out.class_count = ds.class_count;
  out.name = ds.name;
  out.class_names = ds.class_names;
  return out;
}

Standardizer Standardizer::fit(const Dataset& ds, std::span<const std::size_t> rows) {
  if (rows.empty()) throw DataError("standardize: no training rows");
  const std::size_t n = ds.feature_count();
  Standardizer s{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  const double count = static_cast<double>(rows.size());
  for (auto r : rows) {
    const auto x = ds.features.row(r);
    for (std::size_t j = 0; j < n; ++j) s.means[j] += x[j];
  }
  for (auto& m : s.means) m /= count;
  std::vector<double> var(n, 0.0);
  for (auto r : rows) {
    const auto x = ds.features.row(r);
    for (std::size_t j = 0; j < n; ++j) {
      const double d = x[j] - s.means[j];
      var[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double sd = std::sqrt(var[j] / count);
    // Relative threshold: tiny spread from rounding counts as constant.
    s.scales[j] = sd > 1e-12 * std::max(1.0, std::abs(s.means[j])) ? sd : 0.0;
  }
  return s;
}

Dataset Standardizer::apply(const Dataset& ds) const {
  Dataset out = ds;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto x = out.features.row(r);
    for (std::size_t j = 0; j < x.size(); ++j) {
      x[j] = scales[j] > 0.0 ? (x[j] - means[j]) / scales[j] : 0.0;
    }
  }
  return out;
}

Dataset standardize(const Dataset& ds, std::span<const std::size_t> train_rows) {
  return Standardizer::fit(ds, train_rows).apply(ds);
}

SplitIndices split(const Dataset& ds, std::size_t test_count, const SplitSpec& spec) {
  const std::size_t n = ds.rows();
  if (test_count + 1 > n) {
    throw ConfigError("split: test_count " + std::to_string(test_count) + " leaves no training rows out of " +
                      std::to_string(n));
  }
  if (!(spec.validation_fraction >= 0.0 && spec.validation_fraction < 1.0)) {
    throw ConfigError("split: validation_fraction must be in [0, 1)");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(spec.split_seed);
  shuffle(rng, order);

  const std::size_t rest = n - test_count;
  const auto val_count = static_cast<std::size_t>(std::floor(spec.validation_fraction * static_cast<double>(rest)));
  if (val_count >= rest) throw ConfigError("split: validation set leaves no training rows");

  SplitIndices out;
  out.test.assign(order.begin(), order.begin() + static_cast<long>(test_count));
  out.validation.assign(order.begin() + static_cast<long>(test_count),
                        order.begin() + static_cast<long>(test_count + val_count));
  out.train.assign(order.begin() + static_cast<long>(test_count + val_count), order.end());
  return out;
}

Dataset synth_gaussian_blobs(int classes, std::size_t per_class, std::size_t n, double separation,
                             std::uint64_t seed) {
  if (classes < 1 || per_class < 1 || n < 1) throw ConfigError("synth_gaussian_blobs: counts must be >= 1");
  Rng centre_rng = Rng(seed).split(1);
  Rng sample_rng = Rng(seed).split(2);
  Matrix centres(static_cast<std::size_t>(classes), n);
  for (std::size_t c = 0; c < centres.rows(); ++c) {
    for (std::size_t j = 0; j < n; ++j) centres(c, j) = centre_rng.uniform(-separation, separation);
  }
  Dataset ds;
  ds.name = "blobs";
  ds.class_count = classes;
  for (int c = 0; c < classes; ++c) ds.class_names.push_back(std::to_string(c));
  ds.features = Matrix(static_cast<std::size_t>(classes) * per_class, n);
  ds.labels.resize(ds.features.rows());
  std::size_t r = 0;
  for (int c = 0; c < classes; ++c) {
    for (std::size_t i = 0; i < per_class; ++i, ++r) {
      for (std::size_t j = 0; j < n; ++j) {
        ds.features(r, j) = centres(static_cast<std::size_t>(c), j) + sample_rng.normal();
      }
      ds.labels[r] = c;
    }
  }
  return ds;
}

std::uint64_t fingerprint(std::span<const std::size_t> indices, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (auto v : indices) {
    for (int b = 0; b < 8; ++b) {
      h ^= (static_cast<std::uint64_t>(v) >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

}  // namespace mblbfgs
