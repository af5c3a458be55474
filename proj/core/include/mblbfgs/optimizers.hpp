#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mblbfgs/batching.hpp"
#include "mblbfgs/curvature.hpp"
#include "mblbfgs/errors.hpp"
#include "mblbfgs/numeric.hpp"
#include "mblbfgs/objective.hpp"

namespace mblbfgs {

/// The five compared training methods.
///   mb      fixed memory m_bar, oldest pair evicted when full
///   mb_am   memory grows from m0 to m_max, never reset
///   mb_r    fixed memory m_bar, store emptied whenever full
///   mb_amr  memory grows from m0 to m_max, emptied when full while m <= m_reset
///   adam    first-order baseline
enum class Method { mb, mb_am, mb_r, mb_amr, adam };

inline constexpr Method kAllMethods[] = {Method::mb, Method::mb_am, Method::mb_r, Method::mb_amr,
                                         Method::adam};

std::string_view to_string(Method m);
Method parse_method(std::string_view name);
bool is_lbfgs(Method m) noexcept;
bool is_adaptive(Method m) noexcept;

/// Which rows the gradient difference t is measured on.
enum class CurvatureBatch {
  overlap,  // only the overlap S_k ∩ S_{k+1}, at both iterates
  full,     // the whole batch S_k, at both iterates
};

/// Step length for a given (theta, direction, gradient); overrides the fixed step.
using StepRule = std::function<double(const ParamVector& theta, const ParamVector& direction,
                                      const ParamVector& grad)>;

struct LbfgsSettings {
  double alpha = 2.0;
  int m0 = 1;
  int m_max = 32;
  int m_val = 5;
  int m_reset = 8;
  int m_bar = 10;
  std::size_t iterations = 200;
  double overlap = 0.45;
  std::size_t batch_size = 256;
  double step_size = 0.5;
  CurvatureBatch curvature_batch = CurvatureBatch::overlap;
  StepRule step_rule;
};

struct AdamSettings {
  std::size_t iterations = 200;
  std::size_t batch_size = 64;
  double step_size = 0.02;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct RecordOptions {
  bool test_metrics = true;  // evaluate test loss/CCR every iteration
  bool iterates = false;     // keep every theta_k (tests and diagnostics)
};

struct TrainingSettings {
  LbfgsSettings lbfgs;
  AdamSettings adam;
  RecordOptions record;
};

/// Capacity bounds and reset threshold a variant runs with.
MemoryLimits memory_limits(Method m, const LbfgsSettings& s);

enum class PairEvent { appended, evicted, reset, skipped };

/// One row of training history. Losses are NaN when not available.
struct IterationRecord {
  std::size_t k = 0;
  double train_loss = 0.0;       // C_k on S_k at theta_k
  double validation_loss = 0.0;  // v_k at theta_{k+1}
  double test_loss = 0.0;        // at theta_{k+1}
  double test_ccr = 0.0;
  int m_k = 0;
  int q_k = 0;
  PairEvent event = PairEvent::appended;

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

/// Raised when a run produces non-finite values; carries where it happened.
class TrainingAborted : public NumericError {
public:
  TrainingAborted(const std::string& what, std::size_t iteration, int m_k, int q_k);
  std::size_t iteration;
  int m_k;
  int q_k;
};

struct TrainState {
  ParamVector theta;
  std::size_t k = 0;
  CurvatureStore store;
  DevTracker tracker;
  OverlapSampler sampler;
  std::vector<IterationRecord> history;
  std::vector<ParamVector> iterates;
  std::size_t skipped_pairs = 0;
};

/// Initial state: k = 0, empty store at capacity m0 (or m_bar), first batch drawn.
TrainState make_lbfgs_state(Method m, const LbfgsSettings& s, const Objective& objective,
                            ParamVector theta0, Rng rng);

/// One iteration of adaptive-memory multi-batch L-BFGS.
void lbfgs_step(TrainState& state, Method m, const LbfgsSettings& s, const Objective& objective,
                const RecordOptions& record = {});

struct AdamState {
  ParamVector theta;
  ParamVector first_moment;
  ParamVector second_moment;
  std::size_t k = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState start(ParamVector theta0, const AdamSettings& s);
};

/// One bias-corrected Adam update on the given rows; returns the batch loss
/// at the pre-update parameters.
double adam_step(AdamState& state, const Objective& objective, double eta,
                 std::span<const std::size_t> rows);

struct RunResult {
  Method method = Method::mb;
  std::uint64_t seed = 0;
  std::optional<TestMetrics> initial;
  std::optional<TestMetrics> final;
  std::vector<IterationRecord> history;
  ParamVector theta;
  std::vector<ParamVector> iterates;
  std::size_t skipped_pairs = 0;
  bool aborted = false;
  std::string diagnostic;

  double final_ccr() const { return final ? final->ccr : 0.0; }
};

/// Throws ConfigError when the settings cannot be run on this objective.
void validate_settings(Method m, const TrainingSettings& s, const Objective& objective);

/// Runs the fixed iteration budget of `m` from theta0. Numeric failures end
/// the run early with aborted = true and a diagnostic; the partial history is kept.
RunResult train(const Objective& objective, Method m, const TrainingSettings& s, const ParamVector& theta0,
                std::uint64_t seed);

}  // namespace mblbfgs
