#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "profmon/errors.hpp"
#include "profmon/simulate.hpp"

namespace profmon {

namespace {

class InControlArl {
 public:
  InControlArl(const ProcessModel& model, double theta, const SimulationConfig& config)
      : model_(model),
        scenario_(ShiftScenario::in_control(model.profiles())),
        theta_(theta),
        config_(config) {}

  ArlEstimate operator()(double l_b, std::uint64_t replications) const {
    SimulationConfig c = config_;
    c.replications = replications;
    ChartConfig chart;
    chart.theta = theta_;
    chart.l_b = l_b;
    return estimate_arl(model_, scenario_, c, chart);
  }

 private:
  const ProcessModel& model_;
  ShiftScenario scenario_;
  double theta_;
  SimulationConfig config_;
};

[[noreturn]] void no_bracket(double target) {
  throw NoBracket("in-control ARL " + std::to_string(target) +
                  " is not reachable with a limit multiplier in (0, " +
                  std::to_string(kMaxLimitMultiplier) + "]");
}

}  // namespace

Calibration calibrate_limit(const ProcessModel& model, double theta, double target_arl,
                            const SimulationConfig& config, double tolerance) {
  if (!(target_arl > 1.0)) throw std::invalid_argument("target ARL must exceed 1");
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
  if (config.replications == 0) throw std::invalid_argument("replications must be positive");

  const InControlArl arl(model, theta, config);
  const std::uint64_t base = config.replications;

  // The chart signals on the first sample when l_b == 0, so ARL(0) == 1.
  double lo = 0.0;
  double hi = 1.0;
  while (arl(hi, base).mean_rl < target_arl) {
    if (hi >= kMaxLimitMultiplier) no_bracket(target_arl);
    lo = hi;
    hi = std::min(2.0 * hi, kMaxLimitMultiplier);
  }

  const std::array<std::uint64_t, 3> stage_reps{base, 4 * base, 20 * base};
  const std::array<double, 3> stage_width{1e-2, 2e-3, 1e-9};

  Calibration best;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t stage = 0; stage < stage_reps.size(); ++stage) {
    const auto reps = stage_reps[stage];
    const bool final_stage = stage + 1 == stage_reps.size();

    if (stage > 0) {
      // More replications can move the estimate; re-establish the bracket.
      double step = std::max(hi - lo, 1e-3);
      while (lo > 0.0 && arl(lo, reps).mean_rl >= target_arl) {
        hi = lo;
        lo = std::max(0.0, lo - step);
        step *= 2.0;
      }
      while (arl(hi, reps).mean_rl < target_arl) {
        if (hi >= kMaxLimitMultiplier) no_bracket(target_arl);
        lo = hi;
        hi = std::min(hi + step, kMaxLimitMultiplier);
        step *= 2.0;
      }
    }

    for (int iter = 0; iter < 64 && hi - lo > stage_width[stage]; ++iter) {
      const double mid = 0.5 * (lo + hi);
      const auto est = arl(mid, reps);
      if (final_stage) {
        const double gap = std::abs(est.mean_rl - target_arl);
        if (gap < best_gap) {
          best_gap = gap;
          best = Calibration{mid, est};
        }
        if (gap <= tolerance) return best;
      }
      (est.mean_rl < target_arl ? lo : hi) = mid;
    }
  }
  if (best_gap == std::numeric_limits<double>::infinity()) {
    const double mid = 0.5 * (lo + hi);
    best = Calibration{mid, arl(mid, stage_reps.back())};
  }
  return best;
}

Calibration calibrate_shewhart(const ProcessModel& model, double target_arl,
                               const SimulationConfig& config) {
  if (!(target_arl > 1.0)) throw std::invalid_argument("target ARL must exceed 1");
  if (config.replications == 0) throw std::invalid_argument("replications must be positive");

  const auto samples = std::max<std::uint64_t>(
      200 * config.replications, static_cast<std::uint64_t>(std::ceil(100.0 * target_arl)));
  auto stats = shewhart_statistics(model, samples, config.seed, 0);

  // Choose m so that exactly `exceed` statistics lie above it.
  const auto exceed = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::llround(static_cast<double>(samples) / target_arl)));
  const auto split = samples - exceed;
  std::nth_element(stats.begin(), stats.begin() + static_cast<std::ptrdiff_t>(split),
                   stats.end());
  const double upper = stats[split];
  const double lower =
      split == 0 ? 0.0
                 : *std::max_element(stats.begin(),
                                     stats.begin() + static_cast<std::ptrdiff_t>(split));
  const double m_alpha = 0.5 * (lower + upper);
  if (!(m_alpha > 0.0) || m_alpha > kMaxLimitMultiplier) no_bracket(target_arl);

  const double n = static_cast<double>(samples);
  const double prob = static_cast<double>(exceed) / n;
  ArlEstimate est;
  est.mean_rl = 1.0 / prob;
  est.std_err = std::sqrt(prob * (1.0 - prob) / n) / (prob * prob);
  est.replications = samples;
  est.censored = 0;
  return Calibration{m_alpha, est};
}

}  // namespace profmon
