#include "profmon/simulate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "parallel.hpp"
#include "profmon/errors.hpp"
#include "profmon/stats.hpp"
#include "simulate_kernel.hpp"

namespace profmon {

ShiftScenario ShiftScenario::in_control(std::size_t profiles) {
  return ShiftScenario{std::vector<double>(profiles, 0.0), std::vector<double>(profiles, 0.0),
                       std::vector<double>(profiles, 1.0)};
}

void ShiftScenario::validate(std::size_t profiles) const {
  if (intercept_shifts.size() != profiles || slope_shifts.size() != profiles ||
      stddev_factors.size() != profiles) {
    throw DimensionMismatch("scenario lists must each have " + std::to_string(profiles) +
                            " entries");
  }
  for (double f : stddev_factors) {
    if (!(f > 0.0) || !std::isfinite(f)) {
      throw std::invalid_argument("stddev factors must be positive and finite");
    }
  }
}

ProcessModel apply_scenario(const ProcessModel& model, const ShiftScenario& scenario) {
  const auto p = model.profiles();
  scenario.validate(p);
  const double sigma_1 = std::sqrt(model.covariance()(0, 0));
  CoefMatrix b = model.coefficients();
  for (std::size_t j = 0; j < p; ++j) {
    b.intercepts[j] += scenario.intercept_shifts[j] * sigma_1;
    b.slopes[j] += scenario.slope_shifts[j] * sigma_1;
  }
  Eigen::MatrixXd sigma = model.covariance().matrix();
  for (std::size_t u = 0; u < p; ++u) {
    for (std::size_t v = 0; v < p; ++v) {
      sigma(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) *=
          scenario.stddev_factors[u] * scenario.stddev_factors[v];
    }
  }
  return ProcessModel(model.design(), std::move(b), ErrorCovariance::from_matrix(std::move(sigma)));
}

namespace detail {

void fill_sample(const Eigen::MatrixXd& mean, const Eigen::MatrixXd& factor, NormalStream& rng,
                 SampleMatrix& out) {
  const Eigen::Index n = mean.rows();
  const Eigen::Index p = mean.cols();
  out.resize(n, p);
  double g[16];
  std::vector<double> heap;
  double* draws = g;
  if (p > 16) {
    heap.resize(static_cast<std::size_t>(p));
    draws = heap.data();
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < p; ++k) draws[k] = rng.next();
    for (Eigen::Index u = 0; u < p; ++u) {
      double e = 0.0;
      for (Eigen::Index k = 0; k <= u; ++k) e += factor(u, k) * draws[k];
      out(i, u) = mean(i, u) + e;
    }
  }
}

LimitSchedule::LimitSchedule(const ChartConfig& chart, std::uint64_t max_steps) {
  limits_.push_back(0.0);
  if (chart.limit_mode == LimitMode::kSteadyState) {
    tail_ = control_limit(1, chart);
    return;
  }
  const double keep_sq = (1.0 - chart.theta) * (1.0 - chart.theta);
  for (std::uint64_t j = 1; j <= max_steps; ++j) {
    limits_.push_back(control_limit(j, chart));
    // Once (1-theta)^(2j) is below half an ulp of 1 the limit is constant.
    if (std::pow(keep_sq, static_cast<double>(j)) < 1e-17) break;
  }
  tail_ = limits_.back();
}

RunKernel::RunKernel(const ProcessModel& model, const ShiftScenario& scenario)
    : model_(model),
      shifted_(apply_scenario(model, scenario)),
      geometry_(model, sigma_b(model.covariance(), model.design())),
      mean_(mean_response(shifted_)) {}

CoefSumVector RunKernel::draw_sum(NormalStream& rng, SampleMatrix& sample, CoefMatrix& fit) const {
  fill_sample(mean_, shifted_.covariance().factor(), rng, sample);
  fit_profiles_into(sample, model_.design(), fit);
  return coef_sum(fit);
}

RunOutcome RunKernel::run_ewma(const ChartConfig& chart, const LimitSchedule& limits,
                               std::uint64_t max_steps, NormalStream& rng) const {
  SampleMatrix sample(static_cast<Eigen::Index>(model_.points()),
                      static_cast<Eigen::Index>(model_.profiles()));
  CoefMatrix fit;
  EwmaChartState state{geometry_.in_control(), 0};
  while (state.j < max_steps) {
    state = ewma_update(state, draw_sum(rng, sample, fit), chart.theta);
    if (geometry_.max_deviation(state.z).v > limits.at(state.j)) return {state.j, false};
  }
  return {max_steps, true};
}

RunOutcome RunKernel::run_shewhart(double m_alpha, std::uint64_t max_steps,
                                   NormalStream& rng) const {
  SampleMatrix sample(static_cast<Eigen::Index>(model_.points()),
                      static_cast<Eigen::Index>(model_.profiles()));
  CoefMatrix fit;
  for (std::uint64_t k = 1; k <= max_steps; ++k) {
    if (geometry_.max_deviation(draw_sum(rng, sample, fit)).v > m_alpha) return {k, false};
  }
  return {max_steps, true};
}

}  // namespace detail

Eigen::MatrixXd sample_errors(const ErrorCovariance& sigma, std::size_t n, NormalStream& rng) {
  SampleMatrix out;
  const Eigen::MatrixXd zero =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(sigma.dim()));
  detail::fill_sample(zero, sigma.factor(), rng, out);
  return out;
}

SampleMatrix generate_sample(const ProcessModel& shifted, NormalStream& rng) {
  SampleMatrix out;
  detail::fill_sample(mean_response(shifted), shifted.covariance().factor(), rng, out);
  return out;
}

namespace {

void check_config(const SimulationConfig& config) {
  if (config.replications == 0) throw std::invalid_argument("replications must be positive");
  if (config.max_steps == 0) throw std::invalid_argument("max_steps must be positive");
  if (config.replications > 0xffffffffULL) {
    throw std::invalid_argument("replications must fit in 32 bits");
  }
}

template <class RunOne>
ArlEstimate summarize_runs(const SimulationConfig& config, std::uint32_t stream, RunOne&& run_one) {
  check_config(config);
  std::vector<RunOutcome> outcomes(config.replications);
  detail::parallel_for(config.replications, config.workers, [&](std::uint64_t r) {
    NormalStream rng(config.seed, stream, static_cast<std::uint32_t>(r));
    outcomes[r] = run_one(rng);
  });
  RunLengthAccumulator acc;
  for (const auto& o : outcomes) acc.add(o.length, o.censored);
  return ArlEstimate{acc.mean(), acc.std_err(), acc.count, acc.censored};
}

}  // namespace

RunOutcome run_length(const ProcessModel& model, const ShiftScenario& scenario,
                      const SimulationConfig& config, const ChartConfig& chart,
                      NormalStream& rng) {
  chart.validate();
  const detail::RunKernel kernel(model, scenario);
  return kernel.run_ewma(chart, detail::LimitSchedule(chart, config.max_steps), config.max_steps,
                         rng);
}

RunOutcome shewhart_run_length(const ProcessModel& model, const ShiftScenario& scenario,
                               const SimulationConfig& config, double m_alpha,
                               NormalStream& rng) {
  if (!(m_alpha > 0.0)) throw std::invalid_argument("m_alpha must be positive");
  const detail::RunKernel kernel(model, scenario);
  return kernel.run_shewhart(m_alpha, config.max_steps, rng);
}

ArlEstimate estimate_arl(const ProcessModel& model, const ShiftScenario& scenario,
                         const SimulationConfig& config, const ChartConfig& chart,
                         std::uint32_t stream) {
  chart.validate();
  check_config(config);
  const detail::RunKernel kernel(model, scenario);
  const detail::LimitSchedule limits(chart, config.max_steps);
  return summarize_runs(config, stream, [&](NormalStream& rng) {
    return kernel.run_ewma(chart, limits, config.max_steps, rng);
  });
}

ArlEstimate estimate_shewhart_arl(const ProcessModel& model, const ShiftScenario& scenario,
                                  const SimulationConfig& config, double m_alpha,
                                  std::uint32_t stream) {
  if (!(m_alpha > 0.0)) throw std::invalid_argument("m_alpha must be positive");
  const detail::RunKernel kernel(model, scenario);
  return summarize_runs(config, stream, [&](NormalStream& rng) {
    return kernel.run_shewhart(m_alpha, config.max_steps, rng);
  });
}

std::vector<ArlEstimate> arl_table(const ProcessModel& model, const ChartConfig& chart,
                                   const SimulationConfig& config,
                                   const std::vector<ShiftScenario>& grid,
                                   std::uint32_t first_stream) {
  if (grid.empty()) throw std::invalid_argument("scenario grid is empty");
  std::vector<ArlEstimate> out;
  out.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out.push_back(
        estimate_arl(model, grid[k], config, chart, first_stream + static_cast<std::uint32_t>(k)));
  }
  return out;
}

std::vector<double> shewhart_statistics(const ProcessModel& model, std::uint64_t samples,
                                        std::uint64_t seed, std::uint32_t stream) {
  const detail::RunKernel kernel(model, ShiftScenario::in_control(model.profiles()));
  std::vector<double> stats(samples);
  // One substream per block of 1024 samples keeps the substream index small.
  constexpr std::uint64_t kBlock = 1024;
  const std::uint64_t blocks = (samples + kBlock - 1) / kBlock;
  detail::parallel_for(blocks, 0, [&](std::uint64_t b) {
    NormalStream rng(seed, stream, static_cast<std::uint32_t>(b));
    SampleMatrix sample;
    CoefMatrix fit;
    const std::uint64_t end = std::min(samples, (b + 1) * kBlock);
    for (std::uint64_t k = b * kBlock; k < end; ++k) {
      stats[k] = kernel.geometry().max_deviation(kernel.draw_sum(rng, sample, fit)).v;
    }
  });
  return stats;
}

}  // namespace profmon
