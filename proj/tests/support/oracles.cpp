#include "oracles.hpp"

#include <cmath>

namespace mblbfgs::testing {

Eigen::VectorXd to_eigen(const ParamVector& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

ParamVector from_eigen(const Eigen::VectorXd& v) {
  ParamVector out(static_cast<std::size_t>(v.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = v(static_cast<Eigen::Index>(i));
  return out;
}

Eigen::MatrixXd dense_inverse_hessian(const std::deque<CurvaturePair>& pairs, std::size_t d, double gamma) {
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd h = gamma * Eigen::MatrixXd::Identity(n, n);
  for (const auto& p : pairs) {
    const Eigen::VectorXd s = to_eigen(p.s);
    const Eigen::VectorXd t = to_eigen(p.t);
    const double rho = 1.0 / t.dot(s);
    const Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n) - rho * t * s.transpose();
    h = v.transpose() * h * v + rho * s * s.transpose();
  }
  return h;
}

ParamVector dense_bfgs_oracle(const std::deque<CurvaturePair>& pairs, const ParamVector& g) {
  double gamma = 1.0;
  if (!pairs.empty()) {
    const Eigen::VectorXd s = to_eigen(pairs.back().s);
    const Eigen::VectorXd t = to_eigen(pairs.back().t);
    gamma = s.dot(t) / t.dot(t);
  }
  const Eigen::MatrixXd h = dense_inverse_hessian(pairs, g.size(), gamma);
  return from_eigen(-(h * to_eigen(g)));
}

ParamVector finite_difference_gradient(const std::function<double(const ParamVector&)>& f, const ParamVector& x,
                                       double h) {
  ParamVector grad(x.size());
  ParamVector probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

double naive_dot(const ParamVector& a, const ParamVector& b) {
  long double sum = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) sum += static_cast<long double>(a[i]) * b[i];
  return static_cast<double>(sum);
}

ParamVector random_vector(Rng& rng, std::size_t d, double scale) {
  ParamVector v(d);
  for (auto& x : v) x = scale * rng.normal();
  return v;
}

Eigen::MatrixXd random_spd(Rng& rng, std::size_t d, double lo, double hi) {
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rng.normal();
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd eig(n);
  for (Eigen::Index i = 0; i < n; ++i) eig(i) = lo + (hi - lo) * static_cast<double>(i) / std::max<double>(1.0, static_cast<double>(n - 1));
  return q * eig.asDiagonal() * q.transpose();
}

std::deque<CurvaturePair> random_pairs(Rng& rng, std::size_t d, std::size_t count) {
  std::deque<CurvaturePair> pairs;
  while (pairs.size() < count) {
    const Eigen::MatrixXd m = random_spd(rng, d, 0.2, 5.0);
    ParamVector s = random_vector(rng, d);
    ParamVector t = from_eigen(m * to_eigen(s));
    if (auto p = CurvaturePair::make(std::move(s), std::move(t))) pairs.push_back(std::move(*p));
  }
  return pairs;
}

QuadraticObjective::QuadraticObjective(Eigen::MatrixXd a, std::vector<Eigen::VectorXd> centres, bool with_validation)
    : a_(std::move(a)), centres_(std::move(centres)), with_validation_(with_validation) {}

LossAndGrad QuadraticObjective::loss_and_grad(const ParamVector& theta, std::span<const std::size_t> rows) const {
  const Eigen::VectorXd x = to_eigen(theta);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(a_.rows());
  double loss = 0.0;
  for (auto r : rows) {
    const Eigen::VectorXd diff = x - centres_[r];
    const Eigen::VectorXd ad = a_ * diff;
    loss += 0.5 * diff.dot(ad);
    grad += ad;
  }
  const double inv = 1.0 / static_cast<double>(rows.size());
  return {loss * inv, from_eigen(grad * inv)};
}

double QuadraticObjective::validation_loss(const ParamVector& theta) const { return value(theta); }

double QuadraticObjective::value(const ParamVector& theta) const {
  std::vector<std::size_t> all(centres_.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return loss_and_grad(theta, all).loss;
}

ParamVector QuadraticObjective::gradient(const ParamVector& theta) const {
  std::vector<std::size_t> all(centres_.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return loss_and_grad(theta, all).grad;
}

}  // namespace mblbfgs::testing
