#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "mblbfgs/direction.hpp"
#include "mblbfgs/errors.hpp"
#include "support/oracles.hpp"

namespace mblbfgs {
namespace {

using testing::dense_bfgs_oracle;
using testing::dense_inverse_hessian;
using testing::random_pairs;
using testing::random_vector;

TEST(TwoLoop, EmptyStoreIsSteepestDescent) {
  const auto r = two_loop_direction(std::deque<CurvaturePair>{}, ParamVector{3.0, -1.0});
  EXPECT_EQ(r.direction, (ParamVector{-3.0, 1.0}));
  EXPECT_EQ(r.gamma, 1.0);
}

TEST(TwoLoop, MatchesDenseOracle) {
  Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t q = rng.below(6);
    const auto pairs = random_pairs(rng, 8, q);
    const auto g = random_vector(rng, 8);
    const auto fast = two_loop_direction(pairs, g).direction;
    const auto slow = dense_bfgs_oracle(pairs, g);
    const double scale = std::max(1.0, norm(slow));
    for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(fast[i], slow[i], 1e-10 * scale) << "trial " << trial;
  }
}

TEST(TwoLoop, GammaFromNewestPair) {
  Rng rng(11);
  const auto pairs = random_pairs(rng, 4, 3);
  const auto& last = pairs.back();
  EXPECT_DOUBLE_EQ(initial_scaling(pairs), dot(last.s, last.t) / dot(last.t, last.t));
}

TEST(TwoLoop, ImpliedInverseHessianIsSpd) {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pairs = random_pairs(rng, 6, 1 + rng.below(5));
    const Eigen::MatrixXd h = dense_inverse_hessian(pairs, 6, initial_scaling(pairs));
    EXPECT_LT((h - h.transpose()).norm(), 1e-10 * h.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (h + h.transpose()));
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(TwoLoop, DescentAndLinearity) {
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const auto pairs = random_pairs(rng, 7, 1 + rng.below(5));
    const auto g1 = random_vector(rng, 7);
    const auto g2 = random_vector(rng, 7);
    const auto p1 = two_loop_direction(pairs, g1).direction;
    const auto p2 = two_loop_direction(pairs, g2).direction;
    EXPECT_LT(dot(g1, p1), 0.0);
    const auto combo = two_loop_direction(pairs, axpy(-2.5, g2, g1)).direction;
    const auto expected = axpy(-2.5, p2, p1);
    for (std::size_t i = 0; i < 7; ++i) EXPECT_NEAR(combo[i], expected[i], 1e-10 * (1.0 + norm(expected)));
  }
}

TEST(TwoLoop, ZeroGradientGivesZeroDirection) {
  Rng rng(14);
  const auto pairs = random_pairs(rng, 5, 3);
  const auto r = two_loop_direction(pairs, ParamVector(5));
  for (double v : r.direction) EXPECT_EQ(v, 0.0);
}

TEST(TwoLoop, DimensionMismatchThrows) {
  Rng rng(15);
  const auto pairs = random_pairs(rng, 5, 2);
  EXPECT_THROW(two_loop_direction(pairs, ParamVector(4)), DimensionError);
}

TEST(TwoLoop, CorruptPairThrows) {
  Rng rng(16);
  auto pairs = random_pairs(rng, 3, 2);
  pairs.front().rho = NAN;
  EXPECT_THROW(two_loop_direction(pairs, ParamVector{1.0, 1.0, 1.0}), CorruptStoreError);
}

TEST(TwoLoop, RecoversNewtonStepOnQuadratic) {
  // d exact line searches along two-loop directions on a strictly convex
  // quadratic give conjugate steps, so the next direction is the Newton step.
  Rng rng(17);
  const std::size_t d = 5;
  const Eigen::MatrixXd a = testing::random_spd(rng, d, 0.5, 5.0);
  Eigen::VectorXd x = testing::to_eigen(random_vector(rng, d, 3.0));
  std::deque<CurvaturePair> pairs;
  for (std::size_t k = 0; k < d; ++k) {
    const Eigen::VectorXd g = a * x;
    const Eigen::VectorXd p = testing::to_eigen(two_loop_direction(pairs, testing::from_eigen(g)).direction);
    const double eta = -g.dot(p) / p.dot(a * p);
    const Eigen::VectorXd s = eta * p;
    auto pair = CurvaturePair::make(testing::from_eigen(s), testing::from_eigen(a * s));
    ASSERT_TRUE(pair);
    pairs.push_back(std::move(*pair));
    x += s;
  }
  const Eigen::VectorXd g = a * x;
  const Eigen::VectorXd probe = Eigen::VectorXd::LinSpaced(d, 1.0, 2.0);
  const Eigen::VectorXd newton = -a.ldlt().solve(probe);
  const Eigen::VectorXd got = testing::to_eigen(two_loop_direction(pairs, testing::from_eigen(probe)).direction);
  EXPECT_LT((got - newton).norm(), 1e-8 * newton.norm());
  EXPECT_LT(g.norm(), 1e-8);
}

}  // namespace
}  // namespace mblbfgs
