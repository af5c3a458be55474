#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "mblbfgs/data.hpp"
#include "mblbfgs/model.hpp"
#include "mblbfgs/numeric.hpp"

namespace mblbfgs {

struct TestMetrics {
  double loss = 0.0;
  double ccr = 0.0;  // percent
};

/// A finite-sum objective over indexed training samples, with optional
/// held-out validation and test evaluation.
class Objective {
public:
  virtual ~Objective() = default;

  virtual std::size_t dimension() const = 0;
  virtual std::size_t sample_count() const = 0;

  /// Mean loss over the given training rows and its gradient.
  virtual LossAndGrad loss_and_grad(const ParamVector& theta,
                                    std::span<const std::size_t> rows) const = 0;

  virtual bool has_validation() const { return false; }
  virtual double validation_loss(const ParamVector& theta) const;

  virtual std::optional<TestMetrics> test_metrics(const ParamVector& theta) const;
};

/// MLP classifier objective over a train/validation/test partition.
class MlpObjective final : public Objective {
public:
  /// validation may be empty; test may be empty (test_metrics then returns nullopt).
  MlpObjective(MlpSpec spec, Dataset train, Dataset validation, Dataset test);

  std::size_t dimension() const override { return spec_.parameter_count(); }
  std::size_t sample_count() const override { return train_.rows(); }

  LossAndGrad loss_and_grad(const ParamVector& theta, std::span<const std::size_t> rows) const override;

  bool has_validation() const override { return validation_.size() > 0; }
  double validation_loss(const ParamVector& theta) const override;

  std::optional<TestMetrics> test_metrics(const ParamVector& theta) const override;

  const MlpSpec& spec() const noexcept { return spec_; }
  const Dataset& train() const noexcept { return train_; }

private:
  MlpSpec spec_;
  Dataset train_;
  Batch validation_;
  Batch test_;
};

}  // namespace mblbfgs
