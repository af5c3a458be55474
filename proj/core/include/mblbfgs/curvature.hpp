#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <vector>

#include "mblbfgs/numeric.hpp"

namespace mblbfgs {

/// Displacement s = theta_{k+1} - theta_k, gradient difference t, and
/// rho = 1 / (t . s). Only pairs with t . s > 0 are representable.
struct CurvaturePair {
  ParamVector s;
  ParamVector t;
  double rho = 0.0;

  /// Default relative threshold for accepting t . s as positive curvature.
  static constexpr double kCurvatureTolerance = 1e-10;

  /// Builds a pair, or nullopt when t . s <= tolerance * |t| * |s|.
  static std::optional<CurvaturePair> make(ParamVector s, ParamVector t,
                                           double tolerance = kCurvatureTolerance);
};

struct MemoryLimits {
  int m0 = 1;
  int m_max = 32;
  /// Store is emptied instead of evicting when full and capacity <= m_reset.
  int m_reset = 0;
  double alpha = 2.0;
};

enum class AdmitOutcome { appended, evicted, reset };

/// Bounded history of curvature pairs, oldest first, with a capacity that
/// can only grow from m0 towards m_max.
class CurvatureStore {
public:
  explicit CurvatureStore(MemoryLimits limits);

  int capacity() const noexcept { return capacity_; }
  int count() const noexcept { return static_cast<int>(pairs_.size()); }
  const MemoryLimits& limits() const noexcept { return limits_; }
  const std::deque<CurvaturePair>& pairs() const noexcept { return pairs_; }

  /// Grows capacity to min(round(alpha * m), m_max) when q_holds and m < m_max.
  /// Returns true if the capacity changed.
  bool maybe_grow(bool q_holds);

  /// Stores `pair`, first resetting or evicting when the store is full.
  AdmitOutcome admit(CurvaturePair pair);

  void clear() noexcept { pairs_.clear(); }

private:
  MemoryLimits limits_;
  int capacity_;
  std::deque<CurvaturePair> pairs_;
};

/// Sliding window of the latest m_val validation losses.
class DevTracker {
public:
  explicit DevTracker(std::size_t m_val);

  void push(double validation_loss);

  bool full() const noexcept { return window_.size() == m_val_; }
  std::size_t window_size() const noexcept { return m_val_; }
  const std::deque<double>& window() const noexcept { return window_; }

  /// Improvements v_{i-1} - v_i across the window, oldest first (m_val - 1
  /// values), or nullopt while the window is not yet full.
  std::optional<std::vector<double>> delta_sequence() const;

  /// True iff the window is full and its improvements are strictly decreasing.
  bool q_condition() const;

private:
  std::size_t m_val_;
  std::deque<double> window_;
};

/// Strict decrease check on an improvement sequence.
bool strictly_decreasing(const std::vector<double>& deltas);

}  // namespace mblbfgs
