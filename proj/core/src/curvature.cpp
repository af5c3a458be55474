#include "mblbfgs/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mblbfgs/errors.hpp"

namespace mblbfgs {

std::optional<CurvaturePair> CurvaturePair::make(ParamVector s, ParamVector t, double tolerance) {
  const double ts = dot(t, s);
  if (!std::isfinite(ts) || ts <= tolerance * norm(t) * norm(s) || ts <= 0.0) return std::nullopt;
  const double rho = 1.0 / ts;
  if (!std::isfinite(rho)) return std::nullopt;
  return CurvaturePair{std::move(s), std::move(t), rho};
}

CurvatureStore::CurvatureStore(MemoryLimits limits) : limits_(limits), capacity_(limits.m0) {
  if (limits.m0 < 1) throw ConfigError("curvature: m0 must be >= 1");
  if (limits.m_max < limits.m0) throw ConfigError("curvature: m_max must be >= m0");
  if (limits.m_reset < 0) throw ConfigError("curvature: m_reset must be >= 0");
  if (!(limits.alpha > 1.0)) throw ConfigError("curvature: alpha must be > 1");
}

bool CurvatureStore::maybe_grow(bool q_holds) {
  if (!q_holds || capacity_ >= limits_.m_max) return false;
  const int before = capacity_;
  const auto grown = static_cast<int>(std::lround(limits_.alpha * capacity_));
  capacity_ = std::min(grown, limits_.m_max);
  return capacity_ != before;
}

AdmitOutcome CurvatureStore::admit(CurvaturePair pair) {
  AdmitOutcome outcome = AdmitOutcome::appended;
  if (count() >= capacity_) {
    if (capacity_ <= limits_.m_reset) {
      pairs_.clear();
      outcome = AdmitOutcome::reset;
    } else {
      pairs_.pop_front();
      outcome = AdmitOutcome::evicted;
    }
  }
  pairs_.push_back(std::move(pair));
  return outcome;
}

DevTracker::DevTracker(std::size_t m_val) : m_val_(m_val) {
  if (m_val < 2) throw ConfigError("dev tracker: m_val must be >= 2");
}

void DevTracker::push(double validation_loss) {
  if (window_.size() == m_val_) window_.pop_front();
  window_.push_back(validation_loss);
}

std::optional<std::vector<double>> DevTracker::delta_sequence() const {
  if (!full()) return std::nullopt;
  std::vector<double> deltas;
  deltas.reserve(m_val_ - 1);
  for (std::size_t i = 1; i < window_.size(); ++i) deltas.push_back(window_[i - 1] - window_[i]);
  return deltas;
}

bool DevTracker::q_condition() const {
  const auto deltas = delta_sequence();
  return deltas && strictly_decreasing(*deltas);
}

bool strictly_decreasing(const std::vector<double>& deltas) {
  for (std::size_t i = 1; i < deltas.size(); ++i) {
    if (!(deltas[i - 1] > deltas[i])) return false;
  }
  return true;
}

}  // namespace mblbfgs
