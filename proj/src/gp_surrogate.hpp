// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace scalelaw::detail {

/// Gaussian process on standardized targets with an isotropic Matern-5/2
/// kernel and an optional polynomial trend (constant, linear or full
/// quadratic, centered on a reference point) fitted by ridge least squares.
/// The GP models the trend residuals. The length scale is picked from a
/// fixed ladder by log marginal likelihood, so fitting is deterministic.
class GpSurrogate {
 public:
  enum class Trend { constant, linear, quadratic };

  struct Prediction {
    double mean = 0.0;
    double stddev = 0.0;
  };

  /// Rows of `x` are points in the unit cube; `center` anchors the trend.
  /// Returns false if the kernel matrix cannot be factorized.
  bool fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& center, Trend trend);

  Prediction predict(const Eigen::VectorXd& point) const;

  /// Gradient and Hessian of the trend at the center, in standardized target
  /// units. Only meaningful for the quadratic trend.
  const Eigen::VectorXd& trend_gradient() const { return grad_; }
  const Eigen::MatrixXd& trend_hessian() const { return hess_; }
  Trend trend() const { return trend_; }

 private:
  Eigen::VectorXd features(const Eigen::VectorXd& point) const;
  double kernel(double distance) const;

  Trend trend_ = Trend::constant;
  Eigen::VectorXd center_;
  Eigen::VectorXd beta_;
  Eigen::VectorXd grad_;
  Eigen::MatrixXd hess_;
  Eigen::MatrixXd x_;
  Eigen::VectorXd alpha_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double y_mean_ = 0.0;
  double y_scale_ = 1.0;
  double length_ = 0.2;
};

/// Number of trend features for `dims` inputs.
Eigen::Index trend_size(GpSurrogate::Trend trend, Eigen::Index dims);

}  // namespace scalelaw::detail
