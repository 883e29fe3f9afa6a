// SPDX-License-Identifier: Apache-2.0
#include "scalelaw/isoflop.hpp"

#include <algorithm>
#include <cmath>

#include "scalelaw/error.hpp"
#include "scalelaw/grids.hpp"
#include "scalelaw/laws.hpp"

namespace scalelaw {

IsoflopCurve isoflop_curve(const CoefficientSet& coeffs, ComputeBudget c, double s, double n_min, double n_max,
                           std::size_t samples) {
  check_budget(c);
  check_sparsity(s);
  if (!(n_min < n_max)) throw DomainError("isoflop curve needs n_min < n_max");
  if (samples < 2) throw DomainError("isoflop curve needs at least 2 samples");
  check_count(n_min, "n_min");

  IsoflopCurve curve{law_of(coeffs), c, s, {}};
  curve.samples.reserve(samples);
  for (double n : log_space(n_min, n_max, samples)) {
    const double d = c.flops / (6.0 * n);
    curve.samples.push_back({n, d, evaluate(coeffs, ModelScale{n, d, s})});
  }
  return curve;
}

std::pair<double, double> default_n_range(ComputeBudget c) {
  check_budget(c);
  const double center = std::sqrt(c.flops / 6.0);
  double lo = std::clamp(1e-4 * center, 1e6, 1e13);
  double hi = std::clamp(1e4 * center, 1e6, 1e13);
  if (!(lo < hi)) {
    lo = 1e6;
    hi = 1e13;
  }
  return {lo, hi};
}

IsoflopSample curve_minimum(const IsoflopCurve& curve) {
  if (curve.samples.empty()) throw DomainError("empty isoflop curve");
  const auto it = std::min_element(curve.samples.begin(), curve.samples.end(),
                                   [](const IsoflopSample& a, const IsoflopSample& b) { return a.loss < b.loss; });
  return *it;
}

SpikeReport detect_spike(const IsoflopCurve& curve, double rise_threshold) {
  if (!(rise_threshold > 0.0)) throw DomainError("rise threshold must be > 0");
  if (curve.samples.size() < 2) throw DomainError("isoflop curve needs at least 2 samples");
  const IsoflopSample best = curve_minimum(curve);
  const double first = curve.samples.front().loss;
  SpikeReport report;
  report.rise = (first - best.loss) / best.loss;
  report.interior_minimum = best.n != curve.samples.front().n && best.n != curve.samples.back().n;
  report.spiky = report.interior_minimum && report.rise > rise_threshold;
  return report;
}

DivergenceReport compare_laws(const CoefficientSet& a, const CoefficientSet& b, std::span<const ModelScale> grid) {
  if (grid.empty()) throw DomainError("comparison grid is empty");
  DivergenceReport report;
  report.law_a = law_of(a);
  report.law_b = law_of(b);
  report.points.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double la = evaluate(a, grid[i]);
    const double lb = evaluate(b, grid[i]);
    const double diff = std::abs(la - lb);
    report.points.push_back({grid[i], la, lb, diff});
    if (diff > report.max_abs_diff) {
      report.max_abs_diff = diff;
      report.argmax = i;
    }
  }
  return report;
}

}  // namespace scalelaw
