#include <cmath>
#include <cstdlib>
#include <numbers>

#include <gtest/gtest.h>

#include "carleson/extremal.hpp"

namespace {

using namespace carleson;

constexpr double kE = std::numbers::e;

SearchConfig small_config(Space s, int atoms, int iterations, int restarts) {
  SearchConfig cfg;
  cfg.space = s;
  cfg.atom_count = atoms;
  cfg.iterations = iterations;
  cfg.restarts = restarts;
  return cfg;
}

TEST(Ratio, Examples) {
  const DiscreteMeasure one(Space::disc(), {{SpacePoint{cplx(0.3, -0.2)}, 5.0}});
  EXPECT_NEAR(ratio(one), 1.0, 1e-14);
  const DiscreteMeasure pair(Space::disc(), {{SpacePoint{cplx(0.5)}, 0.75}, {SpacePoint{cplx(-0.5)}, 0.75}});
  EXPECT_NEAR(ratio(pair), 1.6 / 1.36, 1e-14);
  EXPECT_NEAR(ratio(pair.scaled(11.0)), ratio(pair), 1e-14);
}

TEST(SearchConfig, Validation) {
  SearchConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.atom_count = 0;
  EXPECT_THROW(search(cfg), InputError);
  cfg = {};
  cfg.iterations = 0;
  EXPECT_THROW(search(cfg), InputError);
  cfg = {};
  cfg.step_decay = 1.0;
  EXPECT_THROW(search(cfg), InputError);
  cfg = {};
  cfg.step_init = -0.1;
  EXPECT_THROW(search(cfg), InputError);
}

TEST(Search, SingleAtomRatioIsOne) {
  const auto res = search(small_config(Space::disc(), 1, 200, 2));
  EXPECT_NEAR(res.best_ratio, 1.0, 1e-9);
  EXPECT_TRUE(res.violations.empty());
}

TEST(Search, TwoAtomsDisc) {
  const auto res = search(small_config(Space::disc(), 2, 1000, 4));
  EXPECT_GE(res.best_ratio, 1.17);
  EXPECT_LE(res.best_ratio, 2.0 * kE);
  ASSERT_TRUE(res.best_measure.has_value());
  EXPECT_NEAR(ratio(*res.best_measure), res.best_ratio, 1e-12);
  EXPECT_TRUE(res.failures.empty());
  EXPECT_TRUE(res.violations.empty());
}

TEST(Search, TraceShapeAndMonotone) {
  const auto cfg = small_config(Space::ball(2), 3, 150, 3);
  const auto res = search(cfg);
  ASSERT_EQ(res.trace.size(), 450u);
  for (std::size_t i = 0; i < res.trace.size(); ++i) {
    EXPECT_EQ(res.trace[i].iteration, i);
    if (i > 0) {
      EXPECT_GE(res.trace[i].best_ratio, res.trace[i - 1].best_ratio);
    }
  }
  EXPECT_EQ(res.trace.back().best_ratio, res.best_ratio);
  EXPECT_LE(res.best_ratio, 6.0 * kE);
}

TEST(Search, DeterministicAcrossThreadCounts) {
  const auto cfg = small_config(Space::disc(), 3, 300, 4);
  ::setenv("CARLESON_THREADS", "1", 1);
  const auto a = search(cfg);
  ::setenv("CARLESON_THREADS", "3", 1);
  const auto b = search(cfg);
  ::unsetenv("CARLESON_THREADS");
  EXPECT_EQ(a.best_ratio, b.best_ratio);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) EXPECT_EQ(a.trace[i].best_ratio, b.trace[i].best_ratio);
  ASSERT_TRUE(a.best_measure && b.best_measure);
  ASSERT_EQ(a.best_measure->size(), b.best_measure->size());
  for (std::size_t k = 0; k < a.best_measure->size(); ++k) {
    EXPECT_EQ((*a.best_measure)[k].weight, (*b.best_measure)[k].weight);
    EXPECT_EQ((*a.best_measure)[k].point, (*b.best_measure)[k].point);
  }
}

TEST(Search, DifferentSeedsDiffer) {
  auto cfg = small_config(Space::disc(), 2, 100, 1);
  const auto a = search(cfg);
  cfg.seed = 43;
  const auto b = search(cfg);
  EXPECT_NE(a.trace.front().best_ratio, b.trace.front().best_ratio);
}

}  // namespace
