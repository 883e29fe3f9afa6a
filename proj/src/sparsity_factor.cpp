// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>

#include "fit_internal.hpp"
#include "scalelaw/error.hpp"
#include "scalelaw/laws.hpp"

namespace scalelaw {

// Along c the generalized law is p_i(c) = r_i + c x_i with x_i = s_i / n_i^alpha.
// Each record's residual crosses zero once, at c_i = (y_i - r_i) / x_i, so the
// optimum is the root of the objective's derivative inside [min c_i, max c_i].
double fit_sparsity_factor(std::span<const ExperimentRecord> records, const HoffmannCoefficients& base, double gamma,
                           const FitObjectiveConfig& config) {
  detail::require_records(records);
  if (config.metric == FitMetric::huber && !(config.huber_delta > 0.0)) {
    throw DomainError("huber delta must be > 0");
  }
  const GeneralizedCoefficients without_c{
      .e = base.e, .a = base.a, .b = base.b, .c = 0.0, .alpha = base.alpha, .beta = base.beta, .gamma = gamma};
  const std::size_t m = records.size();
  std::vector<double> r(m), x(m), y(m);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double positivity = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const ModelScale& s = records[i].scale;
    if (!(s.sparsity > 0.0)) {
      throw DomainError("record " + std::to_string(i) + ": sparsity factor fitting needs sparsity > 0");
    }
    r[i] = eval_generalized(without_c, s.n_active, s.d_tokens, s.sparsity);
    x[i] = s.sparsity / std::pow(s.n_active, base.alpha);
    y[i] = records[i].loss;
    const double root = (y[i] - r[i]) / x[i];
    lo = std::min(lo, root);
    hi = std::max(hi, root);
    positivity = std::max(positivity, -r[i] / x[i]);
  }
  if (lo == hi) return lo;

  const bool log_space = config.metric == FitMetric::log_mse || config.space == LossSpace::log_loss;
  auto derivative = [&](double c) {
    double g = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double p = r[i] + c * x[i];
      const double residual = log_space ? std::log(p) - std::log(y[i]) : p - y[i];
      const double slope = log_space ? x[i] / p : x[i];
      const double psi = config.metric == FitMetric::huber
                             ? std::clamp(residual, -config.huber_delta, config.huber_delta)
                             : 2.0 * residual;
      g += psi * slope;
    }
    return g;
  };

  if (log_space && lo <= positivity) lo = positivity + 1e-12 * std::max(1.0, std::abs(positivity));
  const double g_lo = derivative(lo);
  const double g_hi = derivative(hi);
  if (g_lo >= 0.0) return lo;
  if (g_hi <= 0.0) return hi;
  std::uintmax_t max_iter = 200;
  const auto bracket = boost::math::tools::toms748_solve(derivative, lo, hi, g_lo, g_hi,
                                                         boost::math::tools::eps_tolerance<double>(52), max_iter);
  return 0.5 * (bracket.first + bracket.second);
}

}  // namespace scalelaw
