#pragma once

#include <cstdint>
#include <vector>

#include "profmon/chart.hpp"
#include "profmon/estimate.hpp"
#include "profmon/model.hpp"
#include "profmon/rng.hpp"
#include "profmon/simulate.hpp"

namespace profmon::detail {

// Writes mean + L * g into `out` row by row, drawing p normals per row.
void fill_sample(const Eigen::MatrixXd& mean, const Eigen::MatrixXd& factor, NormalStream& rng,
                 SampleMatrix& out);

// control_limit(j) tabulated until it stops changing in double precision,
// then held at its final value. Values are bit-identical to control_limit.
class LimitSchedule {
 public:
  LimitSchedule(const ChartConfig& chart, std::uint64_t max_steps);
  double at(std::uint64_t j) const { return j < limits_.size() ? limits_[j] : tail_; }

 private:
  std::vector<double> limits_;
  double tail_ = 0.0;
};

// Read-only state shared by every replication of one (model, scenario)
// pair. Safe to use from several threads at once.
class RunKernel {
 public:
  RunKernel(const ProcessModel& model, const ShiftScenario& scenario);

  RunOutcome run_ewma(const ChartConfig& chart, const LimitSchedule& limits,
                      std::uint64_t max_steps, NormalStream& rng) const;
  RunOutcome run_shewhart(double m_alpha, std::uint64_t max_steps, NormalStream& rng) const;

  // Coefficient sums of one freshly generated sample.
  CoefSumVector draw_sum(NormalStream& rng, SampleMatrix& sample, CoefMatrix& fit) const;

  const ChartGeometry& geometry() const { return geometry_; }

 private:
  ProcessModel model_;
  ProcessModel shifted_;
  ChartGeometry geometry_;
  Eigen::MatrixXd mean_;
};

}  // namespace profmon::detail
