#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "profmon/errors.hpp"
#include "profmon/simulate.hpp"
#include "profmon/stats.hpp"

using namespace profmon;

namespace {

ShiftScenario intercept_shift(double lambda) {
  auto s = ShiftScenario::in_control(2);
  s.intercept_shifts[0] = lambda;
  return s;
}

}  // namespace

TEST(SampleErrors, Covariance) {
  auto m = reference_model(0.5);
  NormalStream rng(5, 0, 0);
  auto e = sample_errors(m.covariance(), 100000, rng);
  ASSERT_EQ(e.rows(), 100000);
  ASSERT_EQ(e.cols(), 2);
  std::vector<double> a(e.col(0).data(), e.col(0).data() + e.rows());
  std::vector<double> b(e.col(1).data(), e.col(1).data() + e.rows());
  auto c = sample_covariance(a, b);
  EXPECT_NEAR(c.value, 0.5, 4 * c.std_err);
  auto v = sample_covariance(a, a);
  EXPECT_NEAR(v.value, 1.0, 4 * v.std_err);
}

TEST(ApplyScenario, MeanShiftsInSigmaOneUnits) {
  Eigen::MatrixXd s(2, 2);
  s << 4, 1, 1, 9;
  auto m = build_model({2, 4, 6, 8}, CoefMatrix{{3, 2}, {2, 1}}, s);
  ShiftScenario sc{{1.0, 0.0}, {0.0, 0.5}, {1.0, 1.0}};
  auto shifted = apply_scenario(m, sc);
  EXPECT_DOUBLE_EQ(shifted.coefficients().intercepts[0], 5.0);
  EXPECT_DOUBLE_EQ(shifted.coefficients().intercepts[1], 2.0);
  EXPECT_DOUBLE_EQ(shifted.coefficients().slopes[1], 2.0);
  EXPECT_DOUBLE_EQ(shifted.covariance()(0, 1), 1.0);
}

TEST(ApplyScenario, StddevFactorsKeepCorrelation) {
  auto m = reference_model(0.9);
  ShiftScenario sc{{0, 0}, {0, 0}, {2.0, 1.5}};
  auto shifted = apply_scenario(m, sc);
  EXPECT_DOUBLE_EQ(shifted.covariance()(0, 0), 4.0);
  EXPECT_DOUBLE_EQ(shifted.covariance()(1, 1), 2.25);
  EXPECT_DOUBLE_EQ(shifted.covariance()(0, 1), 0.9 * 3.0);
  EXPECT_EQ(shifted.coefficients().intercepts, m.coefficients().intercepts);
}

TEST(ApplyScenario, Validation) {
  auto m = reference_model(0.5);
  EXPECT_THROW(apply_scenario(m, ShiftScenario::in_control(3)), DimensionMismatch);
  EXPECT_THROW(apply_scenario(m, ShiftScenario{{0, 0}, {0, 0}, {1, 0}}), std::invalid_argument);
}

TEST(GenerateSample, MeanMatchesShiftedModel) {
  auto m = apply_scenario(reference_model(0.5), intercept_shift(1.0));
  NormalStream rng(9, 0, 0);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(4, 2);
  const int n = 20000;
  for (int k = 0; k < n; ++k) acc += generate_sample(m, rng);
  acc /= n;
  Eigen::MatrixXd mu = mean_response(m);
  EXPECT_LT((acc - mu).cwiseAbs().maxCoeff(), 4.0 / std::sqrt(n));
}

TEST(RunLength, ZeroLimitSignalsImmediately) {
  auto m = reference_model(0.5);
  SimulationConfig cfg;
  NormalStream rng(1, 0, 0);
  auto out = run_length(m, ShiftScenario::in_control(2), cfg, ChartConfig{0.2, 0.0}, rng);
  EXPECT_EQ(out.length, 1u);
  EXPECT_FALSE(out.censored);
}

TEST(RunLength, InfiniteLimitIsCensored) {
  auto m = reference_model(0.5);
  SimulationConfig cfg;
  cfg.max_steps = 300;
  NormalStream rng(1, 0, 0);
  ChartConfig c{0.2, std::numeric_limits<double>::infinity()};
  auto out = run_length(m, intercept_shift(3.0), cfg, c, rng);
  EXPECT_EQ(out.length, 300u);
  EXPECT_TRUE(out.censored);
}

TEST(RunLength, LargeShiftIsCaughtQuickly) {
  auto m = reference_model(0.5);
  SimulationConfig cfg;
  cfg.replications = 500;
  auto est = estimate_arl(m, intercept_shift(6.0), cfg, ChartConfig{});
  EXPECT_LT(est.mean_rl, 3.0);
  EXPECT_EQ(est.censored, 0u);
}

TEST(RunLength, ThetaOneMatchesBandChartPaired) {
  auto m = reference_model(0.5);
  SimulationConfig cfg;
  for (double lambda : {0.0, 0.5, 1.5}) {
    for (std::uint32_t r = 0; r < 200; ++r) {
      NormalStream a(77, 0, r), b(77, 0, r);
      auto e = run_length(m, intercept_shift(lambda), cfg, ChartConfig{1.0, 2.8}, a);
      auto s = shewhart_run_length(m, intercept_shift(lambda), cfg, 2.8, b);
      ASSERT_EQ(e.length, s.length) << "lambda=" << lambda << " r=" << r;
    }
  }
}

TEST(EstimateArl, IndependentOfWorkerCount) {
  auto m = reference_model(0.1);
  SimulationConfig cfg;
  cfg.replications = 300;
  cfg.workers = 1;
  auto one = estimate_arl(m, intercept_shift(1.0), cfg, ChartConfig{}, 4);
  cfg.workers = 3;
  auto three = estimate_arl(m, intercept_shift(1.0), cfg, ChartConfig{}, 4);
  EXPECT_EQ(one.mean_rl, three.mean_rl);
  EXPECT_EQ(one.std_err, three.std_err);
  EXPECT_EQ(one.replications, 300u);
}

TEST(EstimateArl, DecreasesWithShift) {
  auto m = reference_model(0.5);
  SimulationConfig cfg;
  cfg.replications = 1000;
  ChartConfig c{0.2, 3.0};
  double prev = std::numeric_limits<double>::infinity();
  for (double lambda : {0.0, 0.5, 1.0, 2.0}) {
    auto est = estimate_arl(m, intercept_shift(lambda), cfg, c);
    EXPECT_LT(est.mean_rl, prev) << lambda;
    prev = est.mean_rl;
  }
}

TEST(ArlTable, CellsUseConsecutiveStreams) {
  auto m = reference_model(0.5);
  SimulationConfig cfg;
  cfg.replications = 100;
  std::vector<ShiftScenario> grid{intercept_shift(0.5), intercept_shift(1.0), intercept_shift(2.0)};
  auto table = arl_table(m, ChartConfig{}, cfg, grid, 10);
  ASSERT_EQ(table.size(), 3u);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    auto single = estimate_arl(m, grid[k], cfg, ChartConfig{}, static_cast<std::uint32_t>(10 + k));
    EXPECT_EQ(table[k].mean_rl, single.mean_rl);
  }
}

// Covariance of the smoothed vector after j in-control steps is
// (theta / (2 - theta)) (1 - (1 - theta)^(2j)) Sigma_B.
TEST(Ewma, DistributionAfterFewSteps) {
  auto m = reference_model(0.5);
  auto sb = sigma_b(m.covariance(), m.design());
  const double theta = 0.2;
  const int reps = 20000;
  for (int j : {1, 5}) {
    std::vector<double> a(reps), b(reps);
    for (int r = 0; r < reps; ++r) {
      NormalStream rng(3, 0, static_cast<std::uint32_t>(r));
      auto state = ewma_init(m);
      for (int k = 0; k < j; ++k) {
        auto w = coef_sum(fit_profiles(generate_sample(m, rng), m.design()));
        state = ewma_update(state, w, theta);
      }
      a[r] = state.z.b0_sum;
      b[r] = state.z.b1_sum;
    }
    const double f = theta / (2 - theta) * (1 - std::pow(1 - theta, 2 * j));
    auto c11 = sample_covariance(a, a);
    auto c12 = sample_covariance(a, b);
    EXPECT_NEAR(c11.value, f * sb.s11, 4 * c11.std_err) << j;
    EXPECT_NEAR(c12.value, f * sb.s12, 4 * c12.std_err) << j;
  }
}
