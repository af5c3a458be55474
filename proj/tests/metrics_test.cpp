#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "mblbfgs/errors.hpp"
#include "mblbfgs/metrics.hpp"
#include "mblbfgs/numeric.hpp"

namespace mblbfgs {
namespace {

TEST(Ccr, Examples) {
  const std::vector<int> pred{0, 1, 1}, truth{0, 1, 0};
  EXPECT_NEAR(ccr(pred, truth), 200.0 / 3.0, 1e-12);
  EXPECT_EQ(ccr(truth, truth), 100.0);
  const std::vector<int> wrong{1, 0, 1};
  EXPECT_EQ(ccr(wrong, truth), 0.0);
}

TEST(Ccr, RejectsEmptyOrMismatched) {
  const std::vector<int> a{0}, b{0, 1}, none;
  EXPECT_THROW(ccr(none, none), MetricError);
  EXPECT_THROW(ccr(a, b), MetricError);
}

TEST(Ccr, PermutationInvariant) {
  Rng rng(3);
  std::vector<int> pred(50), truth(50);
  for (std::size_t i = 0; i < 50; ++i) {
    pred[i] = static_cast<int>(rng.below(3));
    truth[i] = static_cast<int>(rng.below(3));
  }
  const double before = ccr(pred, truth);
  std::vector<std::size_t> order(50);
  std::iota(order.begin(), order.end(), 0u);
  shuffle(rng, order);
  std::vector<int> p2, t2;
  for (auto i : order) {
    p2.push_back(pred[i]);
    t2.push_back(truth[i]);
  }
  EXPECT_EQ(ccr(p2, t2), before);
}

TEST(Rnk, DistinctValues) {
  const std::vector<double> v{90, 95, 80, 70, 99};
  EXPECT_EQ(rnk(v), (std::vector<double>{3, 2, 4, 5, 1}));
}

TEST(Rnk, TiesShareAverageRank) {
  const std::vector<double> v{90, 90, 80, 70, 60};
  EXPECT_EQ(rnk(v), (std::vector<double>{1.5, 1.5, 3, 4, 5}));
  const std::vector<double> all{5, 5, 5};
  EXPECT_EQ(rnk(all), (std::vector<double>{2, 2, 2}));
}

TEST(Rnk, SumsToTriangularNumber) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(5);
    for (auto& x : v) x = static_cast<double>(rng.below(4));
    const auto r = rnk(v);
    EXPECT_EQ(std::accumulate(r.begin(), r.end(), 0.0), 15.0);
  }
}

TEST(MeanStd, SampleStatistics) {
  const std::vector<double> v{2, 4, 4, 4, 5, 5, 7, 9};
  const auto ms = mean_std(v);
  EXPECT_DOUBLE_EQ(ms.mean, 5.0);
  EXPECT_NEAR(ms.std, std::sqrt(32.0 / 7.0), 1e-12);
  const std::vector<double> one{3.5};
  EXPECT_EQ(mean_std(one).std, 0.0);
}

}  // namespace
}  // namespace mblbfgs
