#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "profmon/model.hpp"
#include "profmon/stats.hpp"

namespace profmon {

// Analytical covariance vs. Monte Carlo estimate for one estimator pair.
// `u` and `v` are zero-based profile indices; both are 0 for the assembled
// coefficient-sum entries.
struct CovarianceCheck {
  std::string quantity;  // "intercepts", "slopes", "intercept_slope", "s11", "s22", "s12"
  std::size_t u = 0;
  std::size_t v = 0;
  double analytic = 0.0;
  CovarianceEstimate simulated;
  bool pass = false;

  double z_score() const;
};

struct CovarianceReport {
  std::uint64_t samples = 0;
  double z_threshold = 4.0;
  // Derived formulas: every intercept, slope and cross pair plus s11/s22/s12.
  std::vector<CovarianceCheck> derived;
  // The x_bar (not x_bar^2) intercept factor, per pair and for s11.
  std::vector<CovarianceCheck> printed;

  bool derived_pass() const;
  bool printed_pass() const;
};

// Simulates `samples` in-control samples, fits every profile, and compares
// sample covariances with the closed forms at `z_threshold` standard errors.
CovarianceReport check_covariances(const ProcessModel& model, std::uint64_t samples,
                                   std::uint64_t seed, double z_threshold = 4.0);

}  // namespace profmon
