#include "profmon/model.hpp"

#include <cmath>
#include <string>

#include "profmon/errors.hpp"

namespace profmon {

DesignPoints DesignPoints::from_values(std::vector<double> x) {
  if (x.size() < 2) {
    throw DimensionMismatch("design needs at least 2 points, got " + std::to_string(x.size()));
  }
  double sum = 0.0;
  for (double v : x) {
    if (!std::isfinite(v)) throw DimensionMismatch("design point is not finite");
    sum += v;
  }
  const double x_bar = sum / static_cast<double>(x.size());
  double s_xx = 0.0;
  for (double v : x) s_xx += (v - x_bar) * (v - x_bar);
  if (!(s_xx > 0.0)) throw DegenerateDesign("all design points are equal (s_xx = 0)");
  return DesignPoints(std::move(x), x_bar, s_xx);
}

void CoefMatrix::validate() const {
  if (intercepts.empty()) throw DimensionMismatch("coefficient matrix has no profiles");
  if (intercepts.size() != slopes.size()) {
    throw DimensionMismatch("intercepts has " + std::to_string(intercepts.size()) +
                            " entries but slopes has " + std::to_string(slopes.size()));
  }
}

Eigen::MatrixXd lower_cholesky(const Eigen::MatrixXd& a) {
  const Eigen::Index p = a.rows();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index k = 0; k < p; ++k) {
    double pivot = a(k, k);
    for (Eigen::Index m = 0; m < k; ++m) pivot -= l(k, m) * l(k, m);
    if (!(a(k, k) > 0.0) || !(pivot > kPivotTolerance * a(k, k))) {
      throw NotPositiveDefinite("matrix is not positive definite (pivot " + std::to_string(k) +
                                " = " + std::to_string(pivot) + ")");
    }
    l(k, k) = std::sqrt(pivot);
    for (Eigen::Index r = k + 1; r < p; ++r) {
      double s = a(r, k);
      for (Eigen::Index m = 0; m < k; ++m) s -= l(r, m) * l(k, m);
      l(r, k) = s / l(k, k);
    }
  }
  return l;
}

ErrorCovariance ErrorCovariance::from_matrix(Eigen::MatrixXd sigma) {
  if (sigma.rows() == 0 || sigma.rows() != sigma.cols()) {
    throw DimensionMismatch("covariance must be a non-empty square matrix");
  }
  for (Eigen::Index u = 0; u < sigma.rows(); ++u) {
    if (!(sigma(u, u) > 0.0)) {
      throw NotPositiveDefinite("covariance diagonal must be strictly positive");
    }
    for (Eigen::Index v = u + 1; v < sigma.cols(); ++v) {
      if (sigma(u, v) != sigma(v, u)) throw NotPositiveDefinite("covariance is not symmetric");
    }
  }
  Eigen::MatrixXd factor = lower_cholesky(sigma);
  return ErrorCovariance(std::move(sigma), std::move(factor));
}

ProcessModel::ProcessModel(DesignPoints design, CoefMatrix coefficients,
                           ErrorCovariance covariance)
    : design_(std::move(design)),
      coefficients_(std::move(coefficients)),
      covariance_(std::move(covariance)) {
  coefficients_.validate();
  if (coefficients_.profiles() != covariance_.dim()) {
    throw DimensionMismatch("coefficients describe " + std::to_string(coefficients_.profiles()) +
                            " profiles but covariance is " + std::to_string(covariance_.dim()) +
                            "x" + std::to_string(covariance_.dim()));
  }
}

ProcessModel build_model(std::vector<double> x, CoefMatrix b0, Eigen::MatrixXd sigma) {
  auto design = DesignPoints::from_values(std::move(x));
  b0.validate();
  auto covariance = ErrorCovariance::from_matrix(std::move(sigma));
  return ProcessModel(std::move(design), std::move(b0), std::move(covariance));
}

Eigen::MatrixXd mean_response(const ProcessModel& model) {
  const auto& design = model.design();
  const auto& b = model.coefficients();
  const auto n = static_cast<Eigen::Index>(model.points());
  const auto p = static_cast<Eigen::Index>(model.profiles());
  Eigen::MatrixXd mean(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      mean(i, j) = b.intercepts[j] + b.slopes[j] * design.x(i);
    }
  }
  return mean;
}

ProcessModel reference_model(double rho) {
  Eigen::MatrixXd sigma(2, 2);
  sigma << 1.0, rho, rho, 1.0;
  return build_model({2.0, 4.0, 6.0, 8.0}, CoefMatrix{{3.0, 2.0}, {2.0, 1.0}}, std::move(sigma));
}

ProcessModel with_correlation(const ProcessModel& model, double rho) {
  Eigen::MatrixXd sigma = model.covariance().matrix();
  for (Eigen::Index u = 0; u < sigma.rows(); ++u) {
    for (Eigen::Index v = 0; v < sigma.cols(); ++v) {
      if (u != v) sigma(u, v) = rho * std::sqrt(sigma(u, u) * sigma(v, v));
    }
  }
  return ProcessModel(model.design(), model.coefficients(),
                      ErrorCovariance::from_matrix(std::move(sigma)));
}

}  // namespace profmon
