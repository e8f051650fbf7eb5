#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace profmon {

// Fixed explanatory-variable values shared by every sample, in the order the
// caller supplied them. x_bar and s_xx are computed once at construction.
class DesignPoints {
 public:
  // Throws DimensionMismatch for fewer than two points and DegenerateDesign
  // when s_xx is zero.
  static DesignPoints from_values(std::vector<double> x);

  std::span<const double> x() const { return x_; }
  double x(std::size_t i) const { return x_[i]; }
  double x_bar() const { return x_bar_; }
  double s_xx() const { return s_xx_; }
  std::size_t size() const { return x_.size(); }

 private:
  DesignPoints(std::vector<double> x, double x_bar, double s_xx)
      : x_(std::move(x)), x_bar_(x_bar), s_xx_(s_xx) {}

  std::vector<double> x_;
  double x_bar_;
  double s_xx_;
};

// The 2 x p coefficient matrix: row 0 holds intercepts, row 1 slopes.
struct CoefMatrix {
  std::vector<double> intercepts;
  std::vector<double> slopes;

  std::size_t profiles() const { return intercepts.size(); }
  // Throws DimensionMismatch unless both rows have the same length p >= 1.
  void validate() const;
};

// Symmetric positive-definite p x p covariance of one row of errors, stored
// together with its lower-triangular factor (reused by the sampler).
class ErrorCovariance {
 public:
  static ErrorCovariance from_matrix(Eigen::MatrixXd sigma);

  const Eigen::MatrixXd& matrix() const { return sigma_; }
  const Eigen::MatrixXd& factor() const { return factor_; }
  double operator()(std::size_t u, std::size_t v) const { return sigma_(u, v); }
  std::size_t dim() const { return static_cast<std::size_t>(sigma_.rows()); }
  // 1' * Sigma * 1, the sum of all entries.
  double total() const { return sigma_.sum(); }

 private:
  ErrorCovariance(Eigen::MatrixXd sigma, Eigen::MatrixXd factor)
      : sigma_(std::move(sigma)), factor_(std::move(factor)) {}

  Eigen::MatrixXd sigma_;
  Eigen::MatrixXd factor_;
};

// Known phase II baseline: design, in-control coefficients, error covariance.
// Immutable once built.
class ProcessModel {
 public:
  ProcessModel(DesignPoints design, CoefMatrix coefficients, ErrorCovariance covariance);

  const DesignPoints& design() const { return design_; }
  const CoefMatrix& coefficients() const { return coefficients_; }
  const ErrorCovariance& covariance() const { return covariance_; }
  std::size_t points() const { return design_.size(); }
  std::size_t profiles() const { return coefficients_.profiles(); }

 private:
  DesignPoints design_;
  CoefMatrix coefficients_;
  ErrorCovariance covariance_;
};

// One observed sample: n rows (design points) by p columns (responses).
using SampleMatrix = Eigen::MatrixXd;

ProcessModel build_model(std::vector<double> x, CoefMatrix b0, Eigen::MatrixXd sigma);

// Entry (i, j) is intercept_j + slope_j * x_i.
Eigen::MatrixXd mean_response(const ProcessModel& model);

// Lower-triangular L with L * L' == a. A pivot at or below 1e-12 times the
// corresponding diagonal entry of `a` is treated as a failure and raises
// NotPositiveDefinite.
Eigen::MatrixXd lower_cholesky(const Eigen::MatrixXd& a);

inline constexpr double kPivotTolerance = 1e-12;

// Two correlated profiles y1 = 3 + 2x, y2 = 2 + x observed at x = 2, 4, 6, 8
// with unit error variances and correlation rho. This is the standard
// benchmark setup for the run-length tables.
ProcessModel reference_model(double rho);

// Same model with every off-diagonal entry replaced by
// rho * sqrt(sigma_uu * sigma_vv). Variances are kept.
ProcessModel with_correlation(const ProcessModel& model, double rho);

}  // namespace profmon
