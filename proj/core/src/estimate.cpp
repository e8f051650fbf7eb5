#include "profmon/estimate.hpp"

#include <cmath>
#include <string>

#include "profmon/errors.hpp"

namespace profmon {

void fit_profiles_into(const SampleMatrix& sample, const DesignPoints& design, CoefMatrix& out) {
  const auto n = design.size();
  if (static_cast<std::size_t>(sample.rows()) != n) {
    throw DimensionMismatch("sample has " + std::to_string(sample.rows()) + " rows, design has " +
                            std::to_string(n) + " points");
  }
  const auto p = static_cast<std::size_t>(sample.cols());
  out.intercepts.resize(p);
  out.slopes.resize(p);
  const double x_bar = design.x_bar();
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < p; ++j) {
    double y_sum = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double y = sample(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      y_sum += y;
      sxy += (design.x(i) - x_bar) * y;
    }
    const double slope = sxy / design.s_xx();
    out.slopes[j] = slope;
    out.intercepts[j] = y_sum * inv_n - slope * x_bar;
  }
}

CoefMatrix fit_profiles(const SampleMatrix& sample, const DesignPoints& design) {
  CoefMatrix out;
  fit_profiles_into(sample, design, out);
  return out;
}

CoefSumVector coef_sum(const CoefMatrix& b_hat) {
  CoefSumVector s;
  for (double b : b_hat.intercepts) s.b0_sum += b;
  for (double b : b_hat.slopes) s.b1_sum += b;
  return s;
}

namespace {

double intercept_factor(const DesignPoints& design, InterceptVarianceForm form) {
  const double n = static_cast<double>(design.size());
  const double x_bar = design.x_bar();
  const double numerator = form == InterceptVarianceForm::kDerived ? x_bar * x_bar : x_bar;
  return 1.0 / n + numerator / design.s_xx();
}

}  // namespace

double cov_intercepts(double sigma_uv, const DesignPoints& design, InterceptVarianceForm form) {
  return sigma_uv * intercept_factor(design, form);
}

double cov_slopes(double sigma_uv, const DesignPoints& design) {
  return sigma_uv / design.s_xx();
}

double cov_intercept_slope(double sigma_uv, const DesignPoints& design) {
  return -sigma_uv * design.x_bar() / design.s_xx();
}

SigmaB sigma_b(const ErrorCovariance& sigma, const DesignPoints& design,
               InterceptVarianceForm form) {
  // Var(sum_u b_u) = sum_u sum_v cov(b_u, b_v) and each pairwise covariance is
  // sigma_uv times a factor that depends only on the design, so the bracket
  // collapses to 1' Sigma 1.
  const double total = sigma.total();
  SigmaB sb{cov_intercepts(total, design, form), cov_slopes(total, design),
            cov_intercept_slope(total, design)};
  if (!(sb.s11 > 0.0) || !(sb.s22 > 0.0) || !(sb.s11 * sb.s22 - sb.s12 * sb.s12 > 0.0)) {
    throw NotPositiveDefinite("coefficient-sum covariance is not positive definite (s11=" +
                              std::to_string(sb.s11) + ", s22=" + std::to_string(sb.s22) +
                              ", s12=" + std::to_string(sb.s12) + ")");
  }
  return sb;
}

double point_variance(const DesignPoints& design, std::size_t i, const SigmaB& sb) {
  if (i >= design.size()) {
    throw IndexOutOfRange("design index " + std::to_string(i) + " out of range [0, " +
                          std::to_string(design.size()) + ")");
  }
  const double x = design.x(i);
  return sb.s11 + 2.0 * x * sb.s12 + x * x * sb.s22;
}

}  // namespace profmon
