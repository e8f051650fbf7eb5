#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "profmon/stats.hpp"

using namespace profmon;

TEST(RunLengthAccumulator, KnownValues) {
  RunLengthAccumulator a;
  for (std::uint64_t v : {1, 2, 3, 4}) a.add(v, false);
  a.add(5, true);
  EXPECT_EQ(a.count, 5u);
  EXPECT_EQ(a.censored, 1u);
  EXPECT_DOUBLE_EQ(a.mean(), 3.0);
  EXPECT_DOUBLE_EQ(a.stddev(), std::sqrt(2.5));
  EXPECT_DOUBLE_EQ(a.std_err(), std::sqrt(2.5) / std::sqrt(5.0));
}

TEST(RunLengthAccumulator, EmptyAndSingle) {
  RunLengthAccumulator a;
  EXPECT_EQ(a.std_err(), 0.0);
  a.add(7, false);
  EXPECT_EQ(a.stddev(), 0.0);
  EXPECT_EQ(a.mean(), 7.0);
}

TEST(RunLengthAccumulator, MergeIsOrderIndependent) {
  std::mt19937_64 gen(4);
  std::geometric_distribution<std::uint64_t> rl(0.01);
  std::vector<std::uint64_t> runs(1000);
  for (auto& r : runs) r = rl(gen) + 1;

  RunLengthAccumulator whole;
  for (auto r : runs) whole.add(r, r > 400);

  for (int rep = 0; rep < 10; ++rep) {
    std::shuffle(runs.begin(), runs.end(), gen);
    std::vector<RunLengthAccumulator> parts(1 + rep);
    for (std::size_t i = 0; i < runs.size(); ++i) parts[i % parts.size()].add(runs[i], runs[i] > 400);
    RunLengthAccumulator merged;
    for (const auto& p : parts) merged.merge(p);
    EXPECT_EQ(merged.count, whole.count);
    EXPECT_EQ(merged.censored, whole.censored);
    EXPECT_EQ(merged.sum, whole.sum);
    EXPECT_EQ(merged.sum_sq, whole.sum_sq);
    EXPECT_EQ(merged.std_err(), whole.std_err());
  }
}

TEST(SampleCovariance, KnownValues) {
  std::vector<double> a{1, 2, 3, 4}, b{2, 4, 6, 8};
  auto c = sample_covariance(a, b);
  EXPECT_DOUBLE_EQ(c.value, 10.0 / 3.0);
  EXPECT_DOUBLE_EQ(sample_mean(a), 2.5);
}

TEST(SampleCovariance, StdErrCoversTruth) {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> g;
  int covered = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> a(2000), b(2000);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = g(gen);
      b[i] = 0.6 * a[i] + 0.8 * g(gen);
    }
    auto c = sample_covariance(a, b);
    if (std::abs(c.value - 0.6) < 2.0 * c.std_err) ++covered;
  }
  EXPECT_GT(covered, 0.9 * trials);
}
