#include "profmon/chart.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "profmon/errors.hpp"

namespace profmon {

void ChartConfig::validate() const {
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
  if (!(l_b >= 0.0)) throw std::invalid_argument("l_b must be non-negative");
  if (m_alpha && !(*m_alpha > 0.0)) throw std::invalid_argument("m_alpha must be positive");
}

ChartGeometry::ChartGeometry(const ProcessModel& model, const SigmaB& sb)
    : in_control_(coef_sum(model.coefficients())) {
  const auto& design = model.design();
  const auto n = design.size();
  x_.reserve(n);
  target_.reserve(n);
  inv_sd_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = design.x(i);
    x_.push_back(x);
    target_.push_back(in_control_.b0_sum + x * in_control_.b1_sum);
    inv_sd_.push_back(1.0 / std::sqrt(point_variance(design, i, sb)));
  }
}

ChartGeometry::Deviation ChartGeometry::max_deviation(const CoefSumVector& z) const {
  Deviation d;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    const double v = std::abs(z.b0_sum + x_[i] * z.b1_sum - target_[i]) * inv_sd_[i];
    if (v > d.v) {
      d.v = v;
      d.worst_point = i;
    }
  }
  return d;
}

EwmaChartState ewma_init(const ProcessModel& model) {
  return EwmaChartState{coef_sum(model.coefficients()), 0};
}

EwmaChartState ewma_update(const EwmaChartState& state, const CoefSumVector& w, double theta) {
  const double keep = 1.0 - theta;
  return EwmaChartState{{theta * w.b0_sum + keep * state.z.b0_sum,
                         theta * w.b1_sum + keep * state.z.b1_sum},
                        state.j + 1};
}

std::pair<double, std::size_t> v_statistic(const EwmaChartState& state,
                                           const ProcessModel& model, const SigmaB& sb) {
  const auto d = ChartGeometry(model, sb).max_deviation(state.z);
  return {d.v, d.worst_point};
}

double control_limit(std::uint64_t j, const ChartConfig& config) {
  const double theta = config.theta;
  const double asymptotic = theta / (2.0 - theta);
  if (config.limit_mode == LimitMode::kSteadyState) return config.l_b * std::sqrt(asymptotic);
  const double decay = std::pow(1.0 - theta, 2.0 * static_cast<double>(j));
  return config.l_b * std::sqrt(asymptotic * (1.0 - decay));
}

std::pair<EwmaChartState, ChartVerdict> process_sample(const EwmaChartState& state,
                                                       const SampleMatrix& sample,
                                                       const ProcessModel& model,
                                                       const SigmaB& sb,
                                                       const ChartConfig& config) {
  if (static_cast<std::size_t>(sample.cols()) != model.profiles()) {
    throw DimensionMismatch("sample has " + std::to_string(sample.cols()) +
                            " response columns, model has " + std::to_string(model.profiles()));
  }
  const auto w = coef_sum(fit_profiles(sample, model.design()));
  auto next = ewma_update(state, w, config.theta);
  const auto d = ChartGeometry(model, sb).max_deviation(next.z);
  ChartVerdict verdict;
  verdict.v = d.v;
  verdict.worst_point = d.worst_point;
  verdict.limit = control_limit(next.j, config);
  verdict.signal = verdict.v > verdict.limit;
  return {next, verdict};
}

ChartVerdict shewhart_verdict(const CoefSumVector& b_hat_sum, const ProcessModel& model,
                              const SigmaB& sb, double m_alpha) {
  if (!(m_alpha > 0.0)) throw std::invalid_argument("m_alpha must be positive");
  const auto d = ChartGeometry(model, sb).max_deviation(b_hat_sum);
  return ChartVerdict{d.v, m_alpha, d.v > m_alpha, d.worst_point};
}

}  // namespace profmon
