#include "mblbfgs/optimizers.hpp"

#include <cmath>
#include <limits>

#include "mblbfgs/direction.hpp"

namespace mblbfgs {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kBatchStream = 0x62617463;  // "batc"

void require_finite(bool ok, const char* what, const TrainState& st) {
  if (!ok) {
    throw TrainingAborted(std::string("non-finite ") + what, st.k, st.store.capacity(), st.store.count());
  }
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::mb:
      return "MB";
    case Method::mb_am:
      return "MB-AM";
    case Method::mb_r:
      return "MB-R";
    case Method::mb_amr:
      return "MB-AMR";
    case Method::adam:
      return "Adam";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown method '" + std::string(name) + "' (expected MB, MB-AM, MB-R, MB-AMR or Adam)");
}

bool is_lbfgs(Method m) noexcept { return m != Method::adam; }

bool is_adaptive(Method m) noexcept { return m == Method::mb_am || m == Method::mb_amr; }

MemoryLimits memory_limits(Method m, const LbfgsSettings& s) {
  switch (m) {
    case Method::mb:
      return {s.m_bar, s.m_bar, 0, s.alpha};
    case Method::mb_r:
      return {s.m_bar, s.m_bar, s.m_bar, s.alpha};
    case Method::mb_am:
      return {s.m0, s.m_max, 0, s.alpha};
    case Method::mb_amr:
      return {s.m0, s.m_max, s.m_reset, s.alpha};
    case Method::adam:
      break;
  }
  throw ConfigError("memory limits requested for a non-L-BFGS method");
}

TrainingAborted::TrainingAborted(const std::string& what, std::size_t iteration_, int m_k_, int q_k_)
    : NumericError(what + " at iteration " + std::to_string(iteration_) + " (m_k=" + std::to_string(m_k_) +
                   ", q_k=" + std::to_string(q_k_) + ")"),
      iteration(iteration_),
      m_k(m_k_),
      q_k(q_k_) {}

TrainState make_lbfgs_state(Method m, const LbfgsSettings& s, const Objective& objective, ParamVector theta0,
                            Rng rng) {
  if (theta0.size() != objective.dimension()) {
    throw DimensionError("initial parameters have length " + std::to_string(theta0.size()) + ", objective expects " +
                         std::to_string(objective.dimension()));
  }
  TrainState st{std::move(theta0),
                0,
                CurvatureStore(memory_limits(m, s)),
                DevTracker(static_cast<std::size_t>(s.m_val)),
                OverlapSampler(objective.sample_count(), s.batch_size, s.overlap, rng),
                {},
                {},
                0};
  st.sampler.next_batch();
  return st;
}

namespace {

void lbfgs_step_impl(TrainState& st, Method m, const LbfgsSettings& s, const Objective& objective,
                     const RecordOptions& record) {
  const std::vector<std::size_t> batch = st.sampler.current();

  const LossAndGrad current = objective.loss_and_grad(st.theta, batch);
  require_finite(std::isfinite(current.loss) && current.grad.all_finite(), "loss or gradient", st);

  const DirectionResult dir = two_loop_direction(st.store, current.grad);
  const double eta = s.step_rule ? s.step_rule(st.theta, dir.direction, current.grad) : s.step_size;
  ParamVector next = axpy(eta, dir.direction, st.theta);
  require_finite(next.all_finite(), "parameter update", st);

  st.sampler.next_batch();

  IterationRecord rec;
  rec.k = st.k;
  rec.train_loss = current.loss;

  std::optional<CurvaturePair> pair;
  ParamVector step = subtract(next, st.theta);
  if (s.curvature_batch == CurvatureBatch::full) {
    const ParamVector g_next = objective.loss_and_grad(next, batch).grad;
    require_finite(g_next.all_finite(), "curvature gradient", st);
    pair = CurvaturePair::make(std::move(step), subtract(g_next, current.grad));
  } else {
    const auto shared = overlap_of(batch, st.sampler.current());
    if (!shared.empty()) {
      const ParamVector g_old = objective.loss_and_grad(st.theta, shared).grad;
      const ParamVector g_new = objective.loss_and_grad(next, shared).grad;
      require_finite(g_old.all_finite() && g_new.all_finite(), "curvature gradient", st);
      pair = CurvaturePair::make(std::move(step), subtract(g_new, g_old));
    }
  }

  rec.validation_loss = kNaN;
  if (objective.has_validation()) {
    rec.validation_loss = objective.validation_loss(next);
    require_finite(std::isfinite(rec.validation_loss), "validation loss", st);
    st.tracker.push(rec.validation_loss);
  }

  if (is_adaptive(m)) st.store.maybe_grow(st.tracker.q_condition());

  if (pair) {
    const AdmitOutcome outcome = st.store.admit(std::move(*pair));
    rec.event = outcome == AdmitOutcome::reset     ? PairEvent::reset
                : outcome == AdmitOutcome::evicted ? PairEvent::evicted
                                                   : PairEvent::appended;
  } else {
    rec.event = PairEvent::skipped;
    ++st.skipped_pairs;
  }

  st.theta = std::move(next);
  rec.m_k = st.store.capacity();
  rec.q_k = st.store.count();
  rec.test_loss = kNaN;
  rec.test_ccr = kNaN;
  if (record.test_metrics) {
    if (auto tm = objective.test_metrics(st.theta)) {
      rec.test_loss = tm->loss;
      rec.test_ccr = tm->ccr;
    }
  }
  if (record.iterates) st.iterates.push_back(st.theta);
  st.history.push_back(rec);
  ++st.k;
}

}  // namespace

void lbfgs_step(TrainState& st, Method m, const LbfgsSettings& s, const Objective& objective,
                const RecordOptions& record) {
  try {
    lbfgs_step_impl(st, m, s, objective, record);
  } catch (const TrainingAborted&) {
    throw;
  } catch (const NumericError& e) {
    throw TrainingAborted(e.what(), st.k, st.store.capacity(), st.store.count());
  }
}

AdamState AdamState::start(ParamVector theta0, const AdamSettings& s) {
  const std::size_t d = theta0.size();
  return AdamState{std::move(theta0), ParamVector(d), ParamVector(d), 0, s.beta1, s.beta2, s.epsilon};
}

double adam_step(AdamState& st, const Objective& objective, double eta, std::span<const std::size_t> rows) {
  LossAndGrad lg;
  try {
    lg = objective.loss_and_grad(st.theta, rows);
  } catch (const NumericError& e) {
    throw TrainingAborted(e.what(), st.k, 0, 0);
  }
  if (!std::isfinite(lg.loss) || !lg.grad.all_finite()) {
    throw TrainingAborted("non-finite loss or gradient", st.k, 0, 0);
  }
  ++st.k;
  const double correction1 = 1.0 - std::pow(st.beta1, static_cast<double>(st.k));
  const double correction2 = 1.0 - std::pow(st.beta2, static_cast<double>(st.k));
  for (std::size_t i = 0; i < st.theta.size(); ++i) {
    const double g = lg.grad[i];
    st.first_moment[i] = st.beta1 * st.first_moment[i] + (1.0 - st.beta1) * g;
    st.second_moment[i] = st.beta2 * st.second_moment[i] + (1.0 - st.beta2) * g * g;
    const double m_hat = st.first_moment[i] / correction1;
    const double v_hat = st.second_moment[i] / correction2;
    st.theta[i] -= eta * m_hat / (std::sqrt(v_hat) + st.epsilon);
  }
  if (!st.theta.all_finite()) throw TrainingAborted("non-finite parameter update", st.k - 1, 0, 0);
  return lg.loss;
}

void validate_settings(Method m, const TrainingSettings& s, const Objective& objective) {
  const std::size_t n = objective.sample_count();
  if (is_lbfgs(m)) {
    const auto& l = s.lbfgs;
    if (!(l.overlap > 0.0 && l.overlap < 0.5)) throw ConfigError("lbfgs.overlap must be in (0, 0.5)");
    if (l.batch_size == 0 || l.batch_size > n) {
      throw ConfigError("lbfgs.batch_size must be in [1, " + std::to_string(n) + "] (training rows)");
    }
    if (l.m0 < 1) throw ConfigError("lbfgs.m0 must be >= 1");
    if (l.m_max < l.m0) throw ConfigError("lbfgs.m_max must be >= lbfgs.m0");
    if (l.m_bar < 1) throw ConfigError("lbfgs.m_bar must be >= 1");
    if (l.m_val < 2) throw ConfigError("lbfgs.m_val must be >= 2");
    if (l.m_reset < 0) throw ConfigError("lbfgs.m_reset must be >= 0");
    if (!(l.alpha > 1.0)) throw ConfigError("lbfgs.alpha must be > 1");
    if (!(l.step_size > 0.0) && !l.step_rule) throw ConfigError("lbfgs.step_size must be > 0");
    if (is_adaptive(m) && !objective.has_validation()) {
      throw ConfigError(std::string(to_string(m)) + " needs a validation set (dataset.validation_fraction > 0)");
    }
    // Probes the fresh-index supply for the configured overlap.
    OverlapSampler(n, l.batch_size, l.overlap, Rng(0));
  } else {
    const auto& a = s.adam;
    if (a.batch_size == 0 || a.batch_size > n) {
      throw ConfigError("adam.batch_size must be in [1, " + std::to_string(n) + "] (training rows)");
    }
    if (!(a.beta1 >= 0.0 && a.beta1 < 1.0)) throw ConfigError("adam.beta1 must be in [0, 1)");
    if (!(a.beta2 >= 0.0 && a.beta2 < 1.0)) throw ConfigError("adam.beta2 must be in [0, 1)");
    if (!(a.epsilon > 0.0)) throw ConfigError("adam.epsilon must be > 0");
    if (!(a.step_size > 0.0)) throw ConfigError("adam.step_size must be > 0");
  }
}

RunResult train(const Objective& objective, Method m, const TrainingSettings& s, const ParamVector& theta0,
                std::uint64_t seed) {
  validate_settings(m, s, objective);

  RunResult result;
  result.method = m;
  result.seed = seed;
  result.initial = objective.test_metrics(theta0);
  const Rng batch_rng = Rng(seed).split(kBatchStream);

  if (is_lbfgs(m)) {
    TrainState st = make_lbfgs_state(m, s.lbfgs, objective, theta0, batch_rng);
    try {
      while (st.k < s.lbfgs.iterations) lbfgs_step(st, m, s.lbfgs, objective, s.record);
    } catch (const TrainingAborted& e) {
      result.aborted = true;
      result.diagnostic = e.what();
    }
    result.history = std::move(st.history);
    result.iterates = std::move(st.iterates);
    result.theta = std::move(st.theta);
    result.skipped_pairs = st.skipped_pairs;
  } else {
    AdamState st = AdamState::start(theta0, s.adam);
    Rng rng = batch_rng;
    try {
      while (st.k < s.adam.iterations) {
        IterationRecord rec;
        rec.k = st.k;
        const auto rows = uniform_indices(rng, objective.sample_count(), s.adam.batch_size);
        rec.train_loss = adam_step(st, objective, s.adam.step_size, rows);
        rec.validation_loss = objective.has_validation() ? objective.validation_loss(st.theta) : kNaN;
        rec.test_loss = kNaN;
        rec.test_ccr = kNaN;
        if (s.record.test_metrics) {
          if (auto tm = objective.test_metrics(st.theta)) {
            rec.test_loss = tm->loss;
            rec.test_ccr = tm->ccr;
          }
        }
        if (s.record.iterates) result.iterates.push_back(st.theta);
        result.history.push_back(rec);
      }
    } catch (const NumericError& e) {
      result.aborted = true;
      result.diagnostic = e.what();
    }
    result.theta = std::move(st.theta);
  }

  if (!result.aborted) result.final = objective.test_metrics(result.theta);
  return result;
}

}  // namespace mblbfgs
