#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "profmon/estimate.hpp"
#include "profmon/model.hpp"

namespace profmon {

enum class LimitMode {
  kTimeVarying,  // exact variance of the EWMA vector after j steps
  kSteadyState,  // asymptotic value for every j
};

struct ChartConfig {
  double theta = 0.2;
  double l_b = 3.6233;
  std::optional<double> m_alpha;
  LimitMode limit_mode = LimitMode::kTimeVarying;

  // Throws std::invalid_argument unless 0 < theta <= 1, l_b >= 0 and any
  // m_alpha is positive. l_b == 0 is accepted: it signals on any deviation.
  void validate() const;
};

// Smoothed coefficient sums and the number of samples absorbed since the
// chart started (or was reset by the caller).
struct EwmaChartState {
  CoefSumVector z;
  std::uint64_t j = 0;
};

struct ChartVerdict {
  double v = 0.0;
  double limit = 0.0;
  bool signal = false;
  std::size_t worst_point = 0;  // zero-based design index attaining v
};

// Precomputed per-point quantities for the max-standardized statistic:
// the in-control value X_i B 1 and 1 / sqrt(point_variance(i)).
class ChartGeometry {
 public:
  ChartGeometry(const ProcessModel& model, const SigmaB& sb);

  struct Deviation {
    double v = 0.0;
    std::size_t worst_point = 0;
  };

  // max_i |X_i z - X_i B 1| / sd_i, smallest index on ties.
  Deviation max_deviation(const CoefSumVector& z) const;

  const CoefSumVector& in_control() const { return in_control_; }
  std::size_t points() const { return x_.size(); }

 private:
  CoefSumVector in_control_;
  std::vector<double> x_;
  std::vector<double> target_;
  std::vector<double> inv_sd_;
};

EwmaChartState ewma_init(const ProcessModel& model);

// z_new = theta * w + (1 - theta) * z_old; j advances by one.
EwmaChartState ewma_update(const EwmaChartState& state, const CoefSumVector& w, double theta);

// Returns (V, worst point). Meaningful for j >= 1.
std::pair<double, std::size_t> v_statistic(const EwmaChartState& state, const ProcessModel& model,
                                           const SigmaB& sb);

// l_b * sqrt(theta / (2 - theta) * (1 - (1 - theta)^(2j))) in time-varying
// mode; the j -> infinity value in steady-state mode.
double control_limit(std::uint64_t j, const ChartConfig& config);

// Fit, sum, smooth, compare. Does not reset after a signal.
std::pair<EwmaChartState, ChartVerdict> process_sample(const EwmaChartState& state,
                                                       const SampleMatrix& sample,
                                                       const ProcessModel& model,
                                                       const SigmaB& sb,
                                                       const ChartConfig& config);

// Memoryless confidence-band check on a single sample's coefficient sums.
ChartVerdict shewhart_verdict(const CoefSumVector& b_hat_sum, const ProcessModel& model,
                              const SigmaB& sb, double m_alpha);

}  // namespace profmon
