#pragma once

#include <cstdint>
#include <span>

namespace profmon {

// Sum / sum of squares / count over integer run lengths. Integer arithmetic
// keeps the merge exact, so partial results from any number of workers
// combine to identical totals in any order.
struct RunLengthAccumulator {
  std::uint64_t count = 0;
  std::uint64_t censored = 0;
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;

  void add(std::uint64_t run_length, bool was_censored);
  void merge(const RunLengthAccumulator& other);

  double mean() const;
  // Sample standard deviation (n - 1 denominator); 0 for fewer than 2 runs.
  double stddev() const;
  double std_err() const;
};

// Sample covariance of paired observations and a large-sample standard error
// sqrt((m22 - c^2) / N), where m22 is the mean of squared centred products.
struct CovarianceEstimate {
  double value = 0.0;
  double std_err = 0.0;
};

CovarianceEstimate sample_covariance(std::span<const double> a, std::span<const double> b);

double sample_mean(std::span<const double> a);

}  // namespace profmon
