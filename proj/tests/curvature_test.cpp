#include <gtest/gtest.h>

#include <cmath>

#include "mblbfgs/curvature.hpp"
#include "mblbfgs/errors.hpp"

namespace mblbfgs {
namespace {

CurvaturePair unit_pair(double tag) {
  return *CurvaturePair::make(ParamVector{tag, 1.0}, ParamVector{tag, 1.0});
}

DevTracker filled(std::initializer_list<double> losses) {
  DevTracker t(losses.size());
  for (double v : losses) t.push(v);
  return t;
}

TEST(CurvaturePair, RhoIsInverseCurvature) {
  const auto p = CurvaturePair::make(ParamVector{1.0, 2.0}, ParamVector{3.0, 0.5});
  ASSERT_TRUE(p);
  EXPECT_DOUBLE_EQ(p->rho, 1.0 / 4.0);
}

TEST(CurvaturePair, RejectsNonPositiveCurvature) {
  EXPECT_FALSE(CurvaturePair::make(ParamVector{1.0, 0.0}, ParamVector{0.0, 1.0}));
  EXPECT_FALSE(CurvaturePair::make(ParamVector{1.0, 0.0}, ParamVector{-1.0, 0.0}));
  EXPECT_FALSE(CurvaturePair::make(ParamVector{0.0, 0.0}, ParamVector{0.0, 0.0}));
  EXPECT_FALSE(CurvaturePair::make(ParamVector{1.0, 1e-12}, ParamVector{1e-12, 1.0}));
}

TEST(DevTracker, DeltaSequenceExample) {
  DevTracker t(4);
  t.push(1.0);
  t.push(0.5);
  t.push(0.3);
  EXPECT_FALSE(t.delta_sequence());
  EXPECT_FALSE(t.q_condition());
  t.push(0.25);
  const auto d = t.delta_sequence();
  ASSERT_TRUE(d);
  ASSERT_EQ(d->size(), 3u);
  EXPECT_NEAR((*d)[0], 0.5, 1e-15);
  EXPECT_NEAR((*d)[1], 0.2, 1e-15);
  EXPECT_NEAR((*d)[2], 0.05, 1e-15);
}

TEST(DevTracker, QTruthTable) {
  EXPECT_TRUE(filled({1.0, 0.5, 0.3, 0.25}).q_condition());
  EXPECT_FALSE(filled({1.0, 0.9, 0.7, 0.6}).q_condition());    // 0.1, 0.2 rises
  EXPECT_FALSE(filled({1.0, 0.8, 0.6, 0.4}).q_condition());    // equal improvements
  EXPECT_TRUE(filled({1.0, 1.5, 2.5, 4.5}).q_condition());     // -0.5, -1, -2
  EXPECT_FALSE(filled({1.0, 1.0, 1.0}).q_condition());
  EXPECT_TRUE(filled({2.0, 1.0}).q_condition());               // single delta
}

TEST(DevTracker, WindowSlides) {
  DevTracker t(3);
  for (double v : {9.0, 1.0, 0.5, 0.4}) t.push(v);
  EXPECT_EQ(t.window(), (std::deque<double>{1.0, 0.5, 0.4}));
  EXPECT_TRUE(t.q_condition());
  t.push(0.35);
  EXPECT_TRUE(t.q_condition());  // 0.1, 0.05
  t.push(0.1);
  EXPECT_FALSE(t.q_condition());
}

TEST(DevTracker, RejectsTinyWindow) { EXPECT_THROW(DevTracker(1), ConfigError); }

TEST(StrictlyDecreasing, Basics) {
  EXPECT_TRUE(strictly_decreasing({}));
  EXPECT_TRUE(strictly_decreasing({3.0}));
  EXPECT_TRUE(strictly_decreasing({3.0, 2.0, -1.0}));
  EXPECT_FALSE(strictly_decreasing({3.0, 3.0}));
  EXPECT_FALSE(strictly_decreasing({NAN, 1.0}));
}

TEST(CurvatureStore, GrowthSchedule) {
  CurvatureStore store({1, 32, 0, 2.0});
  std::vector<int> caps{store.capacity()};
  while (store.maybe_grow(true)) caps.push_back(store.capacity());
  EXPECT_EQ(caps, (std::vector<int>{1, 2, 4, 8, 16, 32}));
  EXPECT_FALSE(store.maybe_grow(true));
  EXPECT_EQ(store.capacity(), 32);
}

TEST(CurvatureStore, GrowthCapsAtMax) {
  CurvatureStore store({3, 10, 0, 2.0});
  store.maybe_grow(true);
  EXPECT_EQ(store.capacity(), 6);
  store.maybe_grow(true);
  EXPECT_EQ(store.capacity(), 10);
}

TEST(CurvatureStore, NoGrowthWithoutQ) {
  CurvatureStore store({1, 32, 0, 2.0});
  EXPECT_FALSE(store.maybe_grow(false));
  EXPECT_EQ(store.capacity(), 1);
}

TEST(CurvatureStore, RoundedGrowthCanStall) {
  // round(1.4 * 1) = 1, so capacity stays at 1.
  CurvatureStore store({1, 32, 0, 1.4});
  EXPECT_FALSE(store.maybe_grow(true));
  CurvatureStore two({2, 32, 0, 1.4});
  EXPECT_TRUE(two.maybe_grow(true));
  EXPECT_EQ(two.capacity(), 3);
}

TEST(CurvatureStore, RejectsBadLimits) {
  EXPECT_THROW(CurvatureStore({0, 5, 0, 2.0}), ConfigError);
  EXPECT_THROW(CurvatureStore({6, 5, 0, 2.0}), ConfigError);
  EXPECT_THROW(CurvatureStore({1, 5, -1, 2.0}), ConfigError);
  EXPECT_THROW(CurvatureStore({1, 5, 0, 1.0}), ConfigError);
}

TEST(CurvatureStore, EvictsOldestWhenFullAboveReset) {
  CurvatureStore store({3, 3, 2, 2.0});
  EXPECT_EQ(store.admit(unit_pair(1)), AdmitOutcome::appended);
  EXPECT_EQ(store.admit(unit_pair(2)), AdmitOutcome::appended);
  EXPECT_EQ(store.admit(unit_pair(3)), AdmitOutcome::appended);
  EXPECT_EQ(store.admit(unit_pair(4)), AdmitOutcome::evicted);
  ASSERT_EQ(store.count(), 3);
  EXPECT_EQ(store.pairs().front().s[0], 2.0);
  EXPECT_EQ(store.pairs().back().s[0], 4.0);
}

TEST(CurvatureStore, ResetsWhenFullAtOrBelowReset) {
  CurvatureStore store({2, 2, 2, 2.0});
  store.admit(unit_pair(1));
  store.admit(unit_pair(2));
  EXPECT_EQ(store.admit(unit_pair(3)), AdmitOutcome::reset);
  ASSERT_EQ(store.count(), 1);
  EXPECT_EQ(store.pairs().front().s[0], 3.0);
}

TEST(CurvatureStore, ZeroResetNeverResets) {
  Rng rng(5);
  CurvatureStore store({1, 32, 0, 2.0});
  for (int i = 0; i < 10000; ++i) {
    store.maybe_grow(rng.uniform() < 0.05);
    const int before = store.count();
    const auto out = store.admit(unit_pair(i));
    ASSERT_NE(out, AdmitOutcome::reset);
    EXPECT_GE(store.count(), before);
    EXPECT_LE(store.count(), store.capacity());
  }
}

TEST(CurvatureStore, ResetFuzzMatchesRule) {
  Rng rng(6);
  CurvatureStore store({1, 32, 8, 2.0});
  for (int i = 0; i < 10000; ++i) {
    store.maybe_grow(rng.uniform() < 0.02);
    const int cap = store.capacity();
    const int before = store.count();
    const auto out = store.admit(unit_pair(i));
    if (before < cap) {
      ASSERT_EQ(out, AdmitOutcome::appended);
      ASSERT_EQ(store.count(), before + 1);
    } else if (cap <= 8) {
      ASSERT_EQ(out, AdmitOutcome::reset);
      ASSERT_EQ(store.count(), 1);
    } else {
      ASSERT_EQ(out, AdmitOutcome::evicted);
      ASSERT_EQ(store.count(), cap);
    }
  }
}

TEST(Growth, GeometricDecayKeepsGrowing) {
  // Validation losses 2^-k: improvements halve, so Q holds every step once full.
  CurvatureStore store({1, 32, 0, 2.0});
  DevTracker tracker(5);
  std::vector<int> caps;
  for (int k = 0; k < 20; ++k) {
    tracker.push(std::ldexp(1.0, -k));
    store.maybe_grow(tracker.q_condition());
    caps.push_back(store.capacity());
  }
  EXPECT_EQ(caps[3], 1);
  EXPECT_EQ(caps[4], 2);
  EXPECT_EQ(caps[8], 32);
  EXPECT_TRUE(std::is_sorted(caps.begin(), caps.end()));
}

TEST(Growth, OscillatingLossesNeverGrow) {
  CurvatureStore store({1, 32, 0, 2.0});
  DevTracker tracker(5);
  for (int k = 0; k < 100; ++k) {
    tracker.push(k % 2 ? 1.0 : 2.0);
    store.maybe_grow(tracker.q_condition());
  }
  EXPECT_EQ(store.capacity(), 1);
}

}  // namespace
}  // namespace mblbfgs
