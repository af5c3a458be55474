#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace mblbfgs {

/// Flat parameter vector of a model. All arithmetic is double precision.
class ParamVector {
public:
  ParamVector() = default;
  explicit ParamVector(std::size_t n, double value = 0.0) : values_(n, value) {}
  explicit ParamVector(std::vector<double> values) : values_(std::move(values)) {}
  ParamVector(std::initializer_list<double> values) : values_(values) {}

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }

  auto begin() noexcept { return values_.begin(); }
  auto end() noexcept { return values_.end(); }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  std::span<double> span() noexcept { return values_; }
  std::span<const double> span() const noexcept { return values_; }

  const std::vector<double>& values() const noexcept { return values_; }

  bool all_finite() const noexcept;

  friend bool operator==(const ParamVector&, const ParamVector&) = default;

private:
  std::vector<double> values_;
};

/// Dense row-major matrix.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}
  /// Takes ownership of row-major `data`; its size must be rows * cols.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<const double> flat() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
inline double dot(const ParamVector& a, const ParamVector& b) { return dot(a.span(), b.span()); }

double norm(std::span<const double> a);
inline double norm(const ParamVector& a) { return norm(a.span()); }

/// Returns y + alpha * x.
ParamVector axpy(double alpha, const ParamVector& x, const ParamVector& y);

/// y += alpha * x, in place.
void axpy_inplace(double alpha, std::span<const double> x, std::span<double> y);

/// a - b
ParamVector subtract(const ParamVector& a, const ParamVector& b);

ParamVector scaled(double alpha, const ParamVector& x);

/// Counter-based SplitMix64 generator. The output sequence depends only on
/// (seed, position), so it is identical on every platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed) {}

  std::uint64_t next_u64() noexcept;

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// Uniform real in [0, 1) with 53 bits of resolution.
  double uniform() noexcept;

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Standard normal draw (Box-Muller, one value per call).
  double normal() noexcept;

  /// Independent child generator for a named stream.
  Rng split(std::uint64_t stream) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t position() const noexcept { return position_; }

private:
  std::uint64_t seed_;
  std::uint64_t position_ = 0;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

/// Draws `count` distinct indices from [0, population) in draw order.
std::vector<std::size_t> uniform_indices(Rng& rng, std::size_t population, std::size_t count);

/// Shuffles `items` in place (Fisher-Yates).
template <typename T>
void shuffle(Rng& rng, std::vector<T>& items) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace mblbfgs
