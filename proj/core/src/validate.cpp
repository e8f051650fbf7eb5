#include "profmon/validate.hpp"

#include <cmath>
#include <stdexcept>

#include "parallel.hpp"
#include "profmon/estimate.hpp"
#include "profmon/rng.hpp"
#include "profmon/simulate.hpp"

namespace profmon {

double CovarianceCheck::z_score() const {
  const double diff = simulated.value - analytic;
  if (simulated.std_err > 0.0) return diff / simulated.std_err;
  return diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
}

bool CovarianceReport::derived_pass() const {
  for (const auto& c : derived) {
    if (!c.pass) return false;
  }
  return true;
}

bool CovarianceReport::printed_pass() const {
  for (const auto& c : printed) {
    if (!c.pass) return false;
  }
  return true;
}

CovarianceReport check_covariances(const ProcessModel& model, std::uint64_t samples,
                                   std::uint64_t seed, double z_threshold) {
  if (samples < 2) throw std::invalid_argument("covariance check needs at least 2 samples");
  const auto p = model.profiles();
  const auto& design = model.design();

  // intercepts[j][k], slopes[j][k]: profile j, sample k.
  std::vector<std::vector<double>> intercepts(p, std::vector<double>(samples));
  std::vector<std::vector<double>> slopes(p, std::vector<double>(samples));
  std::vector<double> b0_sum(samples);
  std::vector<double> b1_sum(samples);

  constexpr std::uint64_t kBlock = 1024;
  const std::uint64_t blocks = (samples + kBlock - 1) / kBlock;
  detail::parallel_for(blocks, 0, [&](std::uint64_t b) {
    NormalStream rng(seed, 0, static_cast<std::uint32_t>(b));
    CoefMatrix fit;
    const std::uint64_t end = std::min(samples, (b + 1) * kBlock);
    for (std::uint64_t k = b * kBlock; k < end; ++k) {
      fit_profiles_into(generate_sample(model, rng), design, fit);
      for (std::size_t j = 0; j < p; ++j) {
        intercepts[j][k] = fit.intercepts[j];
        slopes[j][k] = fit.slopes[j];
      }
      const auto s = coef_sum(fit);
      b0_sum[k] = s.b0_sum;
      b1_sum[k] = s.b1_sum;
    }
  });

  CovarianceReport report;
  report.samples = samples;
  report.z_threshold = z_threshold;
  auto make = [&](std::string quantity, std::size_t u, std::size_t v, double analytic,
                  const std::vector<double>& a, const std::vector<double>& b) {
    CovarianceCheck c{std::move(quantity), u, v, analytic, sample_covariance(a, b), false};
    c.pass = std::abs(c.z_score()) <= z_threshold;
    return c;
  };

  const auto& sigma = model.covariance();
  for (std::size_t u = 0; u < p; ++u) {
    for (std::size_t v = u; v < p; ++v) {
      report.derived.push_back(make("intercepts", u, v, cov_intercepts(sigma(u, v), design),
                                    intercepts[u], intercepts[v]));
      report.printed.push_back(
          make("intercepts", u, v,
               cov_intercepts(sigma(u, v), design, InterceptVarianceForm::kPrinted),
               intercepts[u], intercepts[v]));
    }
  }
  for (std::size_t u = 0; u < p; ++u) {
    for (std::size_t v = u; v < p; ++v) {
      report.derived.push_back(
          make("slopes", u, v, cov_slopes(sigma(u, v), design), slopes[u], slopes[v]));
    }
  }
  for (std::size_t u = 0; u < p; ++u) {
    for (std::size_t v = 0; v < p; ++v) {
      report.derived.push_back(make("intercept_slope", u, v,
                                    cov_intercept_slope(sigma(u, v), design), intercepts[u],
                                    slopes[v]));
    }
  }
  const auto sb = sigma_b(sigma, design);
  report.derived.push_back(make("s11", 0, 0, sb.s11, b0_sum, b0_sum));
  report.derived.push_back(make("s22", 0, 0, sb.s22, b1_sum, b1_sum));
  report.derived.push_back(make("s12", 0, 0, sb.s12, b0_sum, b1_sum));
  report.printed.push_back(make(
      "s11", 0, 0, cov_intercepts(sigma.total(), design, InterceptVarianceForm::kPrinted),
      b0_sum, b0_sum));
  return report;
}

}  // namespace profmon
