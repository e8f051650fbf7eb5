#include "profmon/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace profmon {

void RunLengthAccumulator::add(std::uint64_t run_length, bool was_censored) {
  ++count;
  if (was_censored) ++censored;
  sum += run_length;
  sum_sq += run_length * run_length;
}

void RunLengthAccumulator::merge(const RunLengthAccumulator& other) {
  count += other.count;
  censored += other.censored;
  sum += other.sum;
  sum_sq += other.sum_sq;
}

double RunLengthAccumulator::mean() const {
  return count == 0 ? 0.0 : static_cast<double>(sum) / static_cast<double>(count);
}

double RunLengthAccumulator::stddev() const {
  if (count < 2) return 0.0;
  // Integer totals are exact; form the centred sum of squares in long double.
  const long double n = static_cast<long double>(count);
  const long double s = static_cast<long double>(sum);
  const long double centred = static_cast<long double>(sum_sq) - s * s / n;
  return centred <= 0 ? 0.0 : static_cast<double>(std::sqrt(centred / (n - 1)));
}

double RunLengthAccumulator::std_err() const {
  return count == 0 ? 0.0 : stddev() / std::sqrt(static_cast<double>(count));
}

double sample_mean(std::span<const double> a) {
  if (a.empty()) throw std::invalid_argument("mean of an empty sample");
  long double s = 0;
  for (double v : a) s += v;
  return static_cast<double>(s / static_cast<long double>(a.size()));
}

CovarianceEstimate sample_covariance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("covariance of unequal-length samples");
  if (a.size() < 2) throw std::invalid_argument("covariance needs at least 2 observations");
  const double mean_a = sample_mean(a);
  const double mean_b = sample_mean(b);
  long double cross = 0;
  long double cross_sq = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const long double prod = (a[k] - mean_a) * static_cast<long double>(b[k] - mean_b);
    cross += prod;
    cross_sq += prod * prod;
  }
  const long double n = static_cast<long double>(a.size());
  const long double biased = cross / n;
  const long double spread = cross_sq / n - biased * biased;
  CovarianceEstimate est;
  est.value = static_cast<double>(cross / (n - 1));
  est.std_err = static_cast<double>(std::sqrt(spread > 0 ? spread / n : 0.0L));
  return est;
}

}  // namespace profmon
