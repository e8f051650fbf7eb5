#pragma once

#include <cstddef>

#include "profmon/model.hpp"

namespace profmon {

// (sum of intercepts, sum of slopes): the fitted coefficient matrix times a
// vector of ones. This is the 2-vector the chart tracks.
struct CoefSumVector {
  double b0_sum = 0.0;
  double b1_sum = 0.0;

  friend bool operator==(const CoefSumVector&, const CoefSumVector&) = default;
};

// Covariance of CoefSumVector under the in-control model.
struct SigmaB {
  double s11 = 0.0;
  double s22 = 0.0;
  double s12 = 0.0;
};

// Which variance factor to use for intercept covariances.
//   kDerived: 1/n + x_bar^2 / s_xx, what the least-squares algebra gives.
//   kPrinted: 1/n + x_bar / s_xx, a widely reproduced typo. Kept only so
//             the covariance check can show that it disagrees with simulation.
enum class InterceptVarianceForm { kDerived, kPrinted };

// Column-wise least squares of every response on x.
CoefMatrix fit_profiles(const SampleMatrix& sample, const DesignPoints& design);

// Allocation-free variant for hot loops; `out` is resized on first use.
void fit_profiles_into(const SampleMatrix& sample, const DesignPoints& design, CoefMatrix& out);

CoefSumVector coef_sum(const CoefMatrix& b_hat);

// cov(intercept_u, intercept_v) for errors with covariance sigma_uv.
double cov_intercepts(double sigma_uv, const DesignPoints& design,
                      InterceptVarianceForm form = InterceptVarianceForm::kDerived);
// cov(slope_u, slope_v).
double cov_slopes(double sigma_uv, const DesignPoints& design);
// cov(intercept_u, slope_v).
double cov_intercept_slope(double sigma_uv, const DesignPoints& design);

// Closed form using S = 1' Sigma 1:
//   s11 = S (1/n + x_bar^2/s_xx), s22 = S / s_xx, s12 = -S x_bar / s_xx.
// Throws NotPositiveDefinite when the resulting 2x2 is not positive definite,
// which is always the case for the printed form on the reference design.
SigmaB sigma_b(const ErrorCovariance& sigma, const DesignPoints& design,
               InterceptVarianceForm form = InterceptVarianceForm::kDerived);

// Variance of X_i * (B_hat 1), i.e. s11 + 2 x_i s12 + x_i^2 s22.
// `i` is zero-based. Throws IndexOutOfRange.
double point_variance(const DesignPoints& design, std::size_t i, const SigmaB& sb);

}  // namespace profmon
