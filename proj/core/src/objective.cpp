#include "mblbfgs/objective.hpp"

#include <numeric>

#include "mblbfgs/errors.hpp"
#include "mblbfgs/metrics.hpp"

namespace mblbfgs {
namespace {

Batch whole(const Dataset& ds) {
  std::vector<std::size_t> rows(ds.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return gather(ds, rows);
}

}  // namespace

double Objective::validation_loss(const ParamVector&) const {
  throw ConfigError("objective has no validation set");
}

std::optional<TestMetrics> Objective::test_metrics(const ParamVector&) const { return std::nullopt; }

MlpObjective::MlpObjective(MlpSpec spec, Dataset train, Dataset validation, Dataset test)
    : spec_(spec), train_(std::move(train)), validation_(whole(validation)), test_(whole(test)) {
  if (train_.rows() == 0) throw ConfigError("objective: empty training set");
  if (train_.feature_count() != spec_.n_in) {
    throw ConfigError("objective: dataset has " + std::to_string(train_.feature_count()) +
                      " features, model expects " + std::to_string(spec_.n_in));
  }
}

LossAndGrad MlpObjective::loss_and_grad(const ParamVector& theta, std::span<const std::size_t> rows) const {
  return mblbfgs::loss_and_grad(spec_, theta, gather(train_, rows));
}

double MlpObjective::validation_loss(const ParamVector& theta) const {
  if (validation_.size() == 0) return Objective::validation_loss(theta);
  return loss(spec_, theta, validation_);
}

std::optional<TestMetrics> MlpObjective::test_metrics(const ParamVector& theta) const {
  if (test_.size() == 0) return std::nullopt;
  return TestMetrics{loss(spec_, theta, test_), ccr(predict(spec_, theta, test_), test_.labels)};
}

}  // namespace mblbfgs
