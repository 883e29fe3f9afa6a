// SPDX-License-Identifier: Apache-2.0
#include "gp_surrogate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/QR>

namespace scalelaw::detail {
namespace {

constexpr double kNugget = 1e-6;
constexpr double kRidge = 1e-8;
constexpr std::array<double, 6> kLengthLadder = {0.05, 0.1, 0.2, 0.4, 0.8, 1.6};

}  // namespace

Eigen::Index trend_size(GpSurrogate::Trend trend, Eigen::Index dims) {
  switch (trend) {
    case GpSurrogate::Trend::constant:
      return 1;
    case GpSurrogate::Trend::linear:
      return 1 + dims;
    case GpSurrogate::Trend::quadratic:
      return 1 + dims + dims * (dims + 1) / 2;
  }
  return 1;
}

Eigen::VectorXd GpSurrogate::features(const Eigen::VectorXd& point) const {
  const Eigen::Index d = point.size();
  Eigen::VectorXd f(trend_size(trend_, d));
  f(0) = 1.0;
  if (trend_ == Trend::constant) return f;
  const Eigen::VectorXd delta = point - center_;
  f.segment(1, d) = delta;
  if (trend_ == Trend::quadratic) {
    Eigen::Index k = 1 + d;
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = i; j < d; ++j) f(k++) = delta(i) * delta(j);
    }
  }
  return f;
}

double GpSurrogate::kernel(double distance) const {
  const double r = std::sqrt(5.0) * distance / length_;
  return (1.0 + r + r * r / 3.0) * std::exp(-r);
}

bool GpSurrogate::fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& center,
                      Trend trend) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  trend_ = trend;
  center_ = center;
  y_mean_ = y.mean();
  const double var = (y.array() - y_mean_).square().sum() / static_cast<double>(n);
  y_scale_ = var > 0.0 ? std::sqrt(var) : 1.0;
  const Eigen::VectorXd target = (y.array() - y_mean_) / y_scale_;

  // Trend by ridge least squares; the constant column is left unpenalized.
  const Eigen::Index p = trend_size(trend, d);
  Eigen::MatrixXd design(n, p);
  for (Eigen::Index i = 0; i < n; ++i) design.row(i) = features(x.row(i).transpose()).transpose();
  Eigen::MatrixXd normal = design.transpose() * design;
  for (Eigen::Index i = 1; i < p; ++i) normal(i, i) += kRidge * (1.0 + normal(i, i));
  beta_ = normal.colPivHouseholderQr().solve(design.transpose() * target);
  if (!beta_.allFinite()) {
    beta_ = Eigen::VectorXd::Zero(p);
  }
  const Eigen::VectorXd residual = target - design * beta_;

  grad_ = Eigen::VectorXd::Zero(d);
  hess_ = Eigen::MatrixXd::Zero(d, d);
  if (trend != Trend::constant) grad_ = beta_.segment(1, d);
  if (trend == Trend::quadratic) {
    Eigen::Index k = 1 + d;
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = i; j < d; ++j) {
        const double c = beta_(k++);
        if (i == j) {
          hess_(i, i) = 2.0 * c;
        } else {
          hess_(i, j) = hess_(j, i) = c;
        }
      }
    }
  }

  Eigen::MatrixXd dist(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) dist(i, j) = dist(j, i) = (x.row(i) - x.row(j)).norm();
  }

  const double dim_scale = std::sqrt(static_cast<double>(d));
  double best_lml = -std::numeric_limits<double>::infinity();
  double best_length = length_;
  bool ok = false;
  for (double base : kLengthLadder) {
    length_ = base * dim_scale;
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) k(i, j) = kernel(dist(i, j));
      k(i, i) += kNugget;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success) continue;
    Eigen::VectorXd alpha = llt.solve(residual);
    const Eigen::MatrixXd& l = llt.matrixLLT();
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) log_det += std::log(l(i, i));
    const double lml = -0.5 * residual.dot(alpha) - log_det;
    if (std::isfinite(lml) && lml > best_lml) {
      best_lml = lml;
      llt_ = std::move(llt);
      alpha_ = std::move(alpha);
      best_length = length_;
      ok = true;
    }
  }
  length_ = best_length;
  x_ = x;
  return ok;
}

GpSurrogate::Prediction GpSurrogate::predict(const Eigen::VectorXd& point) const {
  const Eigen::Index n = x_.rows();
  Eigen::VectorXd k(n);
  for (Eigen::Index i = 0; i < n; ++i) k(i) = kernel((x_.row(i).transpose() - point).norm());
  const double mean = features(point).dot(beta_) + k.dot(alpha_);
  const Eigen::VectorXd v = llt_.matrixL().solve(k);
  const double var = std::max(0.0, 1.0 + kNugget - v.squaredNorm());
  return {y_mean_ + y_scale_ * mean, y_scale_ * std::sqrt(var)};
}

}  // namespace scalelaw::detail
