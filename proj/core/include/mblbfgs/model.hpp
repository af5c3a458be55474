#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "mblbfgs/numeric.hpp"

namespace mblbfgs {

enum class Activation { tanh, relu, sigmoid };

Activation parse_activation(std::string_view name);
std::string_view to_string(Activation a);

/// Single-hidden-layer perceptron with a softmax output layer.
///
/// Parameter layout inside the flat vector, all row-major:
///   W1 (hidden x n_in), b1 (hidden), W2 (n_classes x hidden), b2 (n_classes)
struct MlpSpec {
  std::size_t n_in = 0;
  std::size_t hidden = 0;
  std::size_t n_classes = 2;
  Activation activation = Activation::tanh;

  std::size_t parameter_count() const noexcept {
    return (n_in + 1) * hidden + (hidden + 1) * n_classes;
  }
  std::size_t w1_offset() const noexcept { return 0; }
  std::size_t b1_offset() const noexcept { return n_in * hidden; }
  std::size_t w2_offset() const noexcept { return (n_in + 1) * hidden; }
  std::size_t b2_offset() const noexcept { return (n_in + 1) * hidden + hidden * n_classes; }
};

/// Rows of inputs with their class labels.
struct Batch {
  Matrix inputs;
  std::vector<int> labels;

  std::size_t size() const noexcept { return labels.size(); }
};

struct LossAndGrad {
  double loss = 0.0;
  ParamVector grad;
};

/// Floor applied to the target-class probability inside the log.
inline constexpr double kProbabilityFloor = 1e-12;

/// Softmax class probabilities, one row per sample.
Matrix forward(const MlpSpec& spec, const ParamVector& theta, const Batch& batch);

/// Mean categorical cross-entropy over the batch and its gradient by backprop.
LossAndGrad loss_and_grad(const MlpSpec& spec, const ParamVector& theta, const Batch& batch);

/// Mean cross-entropy only; skips the backward pass.
double loss(const MlpSpec& spec, const ParamVector& theta, const Batch& batch);

/// Argmax class per row; ties go to the smallest class index.
std::vector<int> predict(const MlpSpec& spec, const ParamVector& theta, const Batch& batch);

/// Glorot-uniform weights, zero biases.
ParamVector initial_parameters(const MlpSpec& spec, Rng& rng);

}  // namespace mblbfgs
