// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scalelaw/coefficients.hpp"
#include "scalelaw/types.hpp"

namespace scalelaw {

struct IsoflopSample {
  double n = 0.0;
  double d = 0.0;
  double loss = 0.0;
};

/// Losses along one constant-compute line, n strictly increasing.
struct IsoflopCurve {
  LawId law = LawId::hoffmann;
  ComputeBudget budget;
  double sparsity = 0.0;
  std::vector<IsoflopSample> samples;
};

/// Log-spaced n in [n_min, n_max], d = C / (6 n). Requires n_min < n_max,
/// samples >= 2; evaluator domain errors propagate.
IsoflopCurve isoflop_curve(const CoefficientSet& coeffs, ComputeBudget c, double s, double n_min, double n_max,
                           std::size_t samples);

/// [1e-4 sqrt(C/6), 1e4 sqrt(C/6)] clipped to [1e6, 1e13].
std::pair<double, double> default_n_range(ComputeBudget c);
inline constexpr std::size_t kDefaultCurveSamples = 256;

/// Sample with the smallest loss; ties go to the smaller n.
IsoflopSample curve_minimum(const IsoflopCurve& curve);

inline constexpr double kDefaultSpikeThreshold = 0.05;

struct SpikeReport {
  bool spiky = false;
  /// (loss at smallest n - minimum loss) / minimum loss.
  double rise = 0.0;
  bool interior_minimum = false;
};

/// Spiky when the rise exceeds the threshold and the minimum is interior
/// (neither the first nor the last sample).
SpikeReport detect_spike(const IsoflopCurve& curve, double rise_threshold = kDefaultSpikeThreshold);

struct DivergencePoint {
  ModelScale scale;
  double loss_a = 0.0;
  double loss_b = 0.0;
  double diff = 0.0;  // |loss_a - loss_b|
};

struct DivergenceReport {
  LawId law_a = LawId::hoffmann;
  LawId law_b = LawId::hoffmann;
  double max_abs_diff = 0.0;
  std::size_t argmax = 0;  // first point reaching the maximum
  std::vector<DivergencePoint> points;
};

DivergenceReport compare_laws(const CoefficientSet& a, const CoefficientSet& b, std::span<const ModelScale> grid);

/// sparsity,n,d,loss with one block of rows per curve.
std::string curves_csv(std::span<const IsoflopCurve> curves);
/// n,d,sparsity,loss_a,loss_b,diff
std::string divergence_csv(const DivergenceReport& report);
/// Standalone SVG line chart, log-scaled x (n), linear y (loss), one
/// polyline per curve.
std::string curves_svg(std::span<const IsoflopCurve> curves);

}  // namespace scalelaw
