#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "profmon/chart.hpp"
#include "profmon/estimate.hpp"
#include "profmon/model.hpp"
#include "profmon/rng.hpp"

namespace profmon {

// An out-of-control condition, with mean shifts in units of sigma_1 (the
// standard deviation of the first response):
//   intercept_j -> intercept_j + intercept_shifts[j] * sigma_1
//   slope_j     -> slope_j     + slope_shifts[j] * sigma_1
//   sigma_uv    -> stddev_factors[u] * stddev_factors[v] * sigma_uv
// The covariance rule rescales standard deviations and keeps correlations.
struct ShiftScenario {
  std::vector<double> intercept_shifts;
  std::vector<double> slope_shifts;
  std::vector<double> stddev_factors;

  static ShiftScenario in_control(std::size_t profiles);
  // Throws DimensionMismatch on length != p, std::invalid_argument on a
  // non-positive factor.
  void validate(std::size_t profiles) const;
};

struct ArlEstimate {
  double mean_rl = 0.0;
  double std_err = 0.0;
  std::uint64_t replications = 0;
  std::uint64_t censored = 0;
};

struct SimulationConfig {
  std::uint64_t replications = 5000;
  std::uint64_t max_steps = 20000;
  std::uint64_t seed = kDefaultSeed;
  // 0 picks std::thread::hardware_concurrency(). Results never depend on it.
  unsigned workers = 0;
};

struct RunOutcome {
  std::uint64_t length = 0;
  bool censored = false;
};

// n rows drawn independently from N(0, Sigma) as L * g.
Eigen::MatrixXd sample_errors(const ErrorCovariance& sigma, std::size_t n, NormalStream& rng);

ProcessModel apply_scenario(const ProcessModel& model, const ShiftScenario& scenario);

// mean_response(shifted) + sample_errors(shifted.covariance(), n).
SampleMatrix generate_sample(const ProcessModel& shifted, NormalStream& rng);

// Zero-state run length of the EWMA chart: the chart starts at the in-control
// value of `model`, data come from apply_scenario(model, scenario) from the
// first sample on. Censored at config.max_steps.
RunOutcome run_length(const ProcessModel& model, const ShiftScenario& scenario,
                      const SimulationConfig& config, const ChartConfig& chart,
                      NormalStream& rng);

// Same for the memoryless band chart with multiplier m_alpha.
RunOutcome shewhart_run_length(const ProcessModel& model, const ShiftScenario& scenario,
                               const SimulationConfig& config, double m_alpha,
                               NormalStream& rng);

// Replication r uses NormalStream(config.seed, stream, r). `stream` lets
// callers give each scenario of a grid its own independent family.
ArlEstimate estimate_arl(const ProcessModel& model, const ShiftScenario& scenario,
                         const SimulationConfig& config, const ChartConfig& chart,
                         std::uint32_t stream = 0);

ArlEstimate estimate_shewhart_arl(const ProcessModel& model, const ShiftScenario& scenario,
                                  const SimulationConfig& config, double m_alpha,
                                  std::uint32_t stream = 0);

// Scenario k of the grid uses stream first_stream + k.
std::vector<ArlEstimate> arl_table(const ProcessModel& model, const ChartConfig& chart,
                                   const SimulationConfig& config,
                                   const std::vector<ShiftScenario>& grid,
                                   std::uint32_t first_stream = 0);

// ---------------------------------------------------------------------------
// Calibration

struct Calibration {
  double constant = 0.0;
  // In-control estimate at `constant` from the last stage. For the band
  // chart mean_rl is 1 / (empirical signal probability).
  ArlEstimate estimate;
};

// Upper end of the admissible range for l_b and m_alpha.
inline constexpr double kMaxLimitMultiplier = 20.0;

// Stochastic bisection on the in-control ARL. The bracket is found by
// doubling from 1 with config.replications runs, then bisected with
// 1x, 4x and 20x that many replications (5k, 20k, 100k by default). Common
// random numbers make the estimate monotone in l_b at each stage. Returns
// once the final-stage estimate is within `tolerance` ARL units of target.
// Throws NoBracket when the target needs l_b > kMaxLimitMultiplier.
Calibration calibrate_limit(const ProcessModel& model, double theta, double target_arl,
                            const SimulationConfig& config, double tolerance = 2.0);

// The band chart is memoryless, so its in-control ARL is 1 / alpha with
// alpha the per-sample signal probability. m_alpha is taken as the
// (1 - 1/target) empirical quantile of the in-control statistic over
// max(200 * config.replications, 100 * target) samples.
Calibration calibrate_shewhart(const ProcessModel& model, double target_arl,
                               const SimulationConfig& config);

// Draws of the band statistic for in-control samples; exposed for checks.
std::vector<double> shewhart_statistics(const ProcessModel& model, std::uint64_t samples,
                                        std::uint64_t seed, std::uint32_t stream);

}  // namespace profmon
