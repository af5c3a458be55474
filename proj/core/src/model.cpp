#include "mblbfgs/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mblbfgs/errors.hpp"

namespace mblbfgs {
namespace {

double activate(Activation a, double z) {
  switch (a) {
    case Activation::tanh:
      return std::tanh(z);
    case Activation::relu:
      return z > 0.0 ? z : 0.0;
    case Activation::sigmoid:
      return 1.0 / (1.0 + std::exp(-z));
  }
  return z;
}

// Derivative expressed through the activation value where possible.
double activate_derivative(Activation a, double z, double value) {
  switch (a) {
    case Activation::tanh:
      return 1.0 - value * value;
    case Activation::relu:
      return z > 0.0 ? 1.0 : 0.0;
    case Activation::sigmoid:
      return value * (1.0 - value);
  }
  return 1.0;
}

void validate(const MlpSpec& spec, const ParamVector& theta, const Batch& batch) {
  if (theta.size() != spec.parameter_count()) {
    throw DimensionError("model: parameter vector has length " + std::to_string(theta.size()) +
                         ", expected " + std::to_string(spec.parameter_count()));
  }
  if (batch.size() == 0) throw DimensionError("model: empty batch");
  if (batch.inputs.rows() != batch.size() || batch.inputs.cols() != spec.n_in) {
    throw DimensionError("model: batch inputs are " + std::to_string(batch.inputs.rows()) + "x" +
                         std::to_string(batch.inputs.cols()) + ", expected " +
                         std::to_string(batch.size()) + "x" + std::to_string(spec.n_in));
  }
  for (int label : batch.labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= spec.n_classes) {
      throw DimensionError("model: label " + std::to_string(label) + " outside [0, " +
                           std::to_string(spec.n_classes) + ")");
    }
  }
}

// Activations of one sample, kept for the backward pass.
struct SampleState {
  std::vector<double> pre;     // hidden pre-activations
  std::vector<double> hidden;  // hidden activations
  std::vector<double> probs;   // softmax output
};

void forward_sample(const MlpSpec& spec, const ParamVector& theta, std::span<const double> x,
                    SampleState& st) {
  const double* w1 = theta.data() + spec.w1_offset();
  const double* b1 = theta.data() + spec.b1_offset();
  const double* w2 = theta.data() + spec.w2_offset();
  const double* b2 = theta.data() + spec.b2_offset();

  st.pre.resize(spec.hidden);
  st.hidden.resize(spec.hidden);
  st.probs.resize(spec.n_classes);

  for (std::size_t j = 0; j < spec.hidden; ++j) {
    double z = b1[j];
    const double* wrow = w1 + j * spec.n_in;
    for (std::size_t i = 0; i < spec.n_in; ++i) z += wrow[i] * x[i];
    st.pre[j] = z;
    st.hidden[j] = activate(spec.activation, z);
  }
  double max_logit = -INFINITY;
  for (std::size_t c = 0; c < spec.n_classes; ++c) {
    double o = b2[c];
    const double* wrow = w2 + c * spec.hidden;
    for (std::size_t j = 0; j < spec.hidden; ++j) o += wrow[j] * st.hidden[j];
    st.probs[c] = o;
    max_logit = std::max(max_logit, o);
  }
  if (!std::isfinite(max_logit)) throw NumericError("model: non-finite output activation");
  double total = 0.0;
  for (auto& p : st.probs) {
    p = std::exp(p - max_logit);
    total += p;
  }
  for (auto& p : st.probs) p /= total;
}

}  // namespace

Activation parse_activation(std::string_view name) {
  if (name == "tanh") return Activation::tanh;
  if (name == "relu") return Activation::relu;
  if (name == "sigmoid") return Activation::sigmoid;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::tanh:
      return "tanh";
    case Activation::relu:
      return "relu";
    case Activation::sigmoid:
      return "sigmoid";
  }
  return "?";
}

Matrix forward(const MlpSpec& spec, const ParamVector& theta, const Batch& batch) {
  validate(spec, theta, batch);
  Matrix out(batch.size(), spec.n_classes);
  SampleState st;
  for (std::size_t r = 0; r < batch.size(); ++r) {
    forward_sample(spec, theta, batch.inputs.row(r), st);
    std::copy(st.probs.begin(), st.probs.end(), out.row(r).begin());
  }
  return out;
}

double loss(const MlpSpec& spec, const ParamVector& theta, const Batch& batch) {
  validate(spec, theta, batch);
  SampleState st;
  double total = 0.0;
  for (std::size_t r = 0; r < batch.size(); ++r) {
    forward_sample(spec, theta, batch.inputs.row(r), st);
    total -= std::log(std::max(st.probs[batch.labels[r]], kProbabilityFloor));
  }
  const double mean = total / static_cast<double>(batch.size());
  if (!std::isfinite(mean)) throw NumericError("model: non-finite loss");
  return mean;
}

LossAndGrad loss_and_grad(const MlpSpec& spec, const ParamVector& theta, const Batch& batch) {
  validate(spec, theta, batch);
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  LossAndGrad out{0.0, ParamVector(theta.size())};
  double* gw1 = out.grad.data() + spec.w1_offset();
  double* gb1 = out.grad.data() + spec.b1_offset();
  double* gw2 = out.grad.data() + spec.w2_offset();
  double* gb2 = out.grad.data() + spec.b2_offset();
  const double* w2 = theta.data() + spec.w2_offset();

  SampleState st;
  std::vector<double> d_out(spec.n_classes);
  std::vector<double> d_hidden(spec.hidden);

  for (std::size_t r = 0; r < batch.size(); ++r) {
    const auto x = batch.inputs.row(r);
    const auto label = static_cast<std::size_t>(batch.labels[r]);
    forward_sample(spec, theta, x, st);

    const double p_target = st.probs[label];
    out.loss -= std::log(std::max(p_target, kProbabilityFloor)) * inv_n;

    // d(-log p_y)/d logits = p - onehot(y); zero where the floor is active.
    if (p_target < kProbabilityFloor) continue;
    for (std::size_t c = 0; c < spec.n_classes; ++c) {
      d_out[c] = (st.probs[c] - (c == label ? 1.0 : 0.0)) * inv_n;
    }

    std::fill(d_hidden.begin(), d_hidden.end(), 0.0);
    for (std::size_t c = 0; c < spec.n_classes; ++c) {
      gb2[c] += d_out[c];
      double* grow = gw2 + c * spec.hidden;
      const double* wrow = w2 + c * spec.hidden;
      for (std::size_t j = 0; j < spec.hidden; ++j) {
        grow[j] += d_out[c] * st.hidden[j];
        d_hidden[j] += d_out[c] * wrow[j];
      }
    }
    for (std::size_t j = 0; j < spec.hidden; ++j) {
      const double dz = d_hidden[j] * activate_derivative(spec.activation, st.pre[j], st.hidden[j]);
      gb1[j] += dz;
      double* grow = gw1 + j * spec.n_in;
      for (std::size_t i = 0; i < spec.n_in; ++i) grow[i] += dz * x[i];
    }
  }

  if (!std::isfinite(out.loss) || !out.grad.all_finite()) {
    throw NumericError("model: non-finite loss or gradient");
  }
  return out;
}

std::vector<int> predict(const MlpSpec& spec, const ParamVector& theta, const Batch& batch) {
  validate(spec, theta, batch);
  std::vector<int> labels(batch.size());
  SampleState st;
  for (std::size_t r = 0; r < batch.size(); ++r) {
    forward_sample(spec, theta, batch.inputs.row(r), st);
    // max_element returns the first maximum, which is the smallest index.
    labels[r] = static_cast<int>(std::max_element(st.probs.begin(), st.probs.end()) - st.probs.begin());
  }
  return labels;
}

ParamVector initial_parameters(const MlpSpec& spec, Rng& rng) {
  ParamVector theta(spec.parameter_count());
  const double a1 = std::sqrt(6.0 / static_cast<double>(spec.n_in + spec.hidden));
  const double a2 = std::sqrt(6.0 / static_cast<double>(spec.hidden + spec.n_classes));
  for (std::size_t i = 0; i < spec.n_in * spec.hidden; ++i) {
    theta[spec.w1_offset() + i] = rng.uniform(-a1, a1);
  }
  for (std::size_t i = 0; i < spec.hidden * spec.n_classes; ++i) {
    theta[spec.w2_offset() + i] = rng.uniform(-a2, a2);
  }
  return theta;
}

}  // namespace mblbfgs
