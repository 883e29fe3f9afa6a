// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numeric>

#include "fit_internal.hpp"
#include "scalelaw/error.hpp"

namespace scalelaw {
namespace {

constexpr double kInitialStep = 0.05;

// Nonzero coefficients move in log-magnitude with their sign fixed, so scale
// constants spanning decades and small exponents get comparable steps.
class Parameterization {
 public:
  explicit Parameterization(std::span<const double> start) : sign_(start.size()) {
    for (std::size_t i = 0; i < start.size(); ++i) sign_[i] = start[i] > 0.0 ? 1 : (start[i] < 0.0 ? -1 : 0);
  }

  std::vector<double> encode(std::span<const double> values) const {
    std::vector<double> z(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) z[i] = sign_[i] == 0 ? values[i] : std::log(std::abs(values[i]));
    return z;
  }

  std::vector<double> decode(std::span<const double> z) const {
    std::vector<double> v(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) v[i] = sign_[i] == 0 ? z[i] : sign_[i] * std::exp(z[i]);
    return v;
  }

 private:
  std::vector<int> sign_;
};

struct Vertex {
  std::vector<double> z;
  double value = 0.0;
};

}  // namespace

FitResult local_refine(const CoefficientSet& start, std::span<const ExperimentRecord> records,
                       const FitObjectiveConfig& config, std::size_t max_iters, double tolerance) {
  detail::require_records(records);
  const LawId law = law_of(start);
  const std::vector<double> start_values = coefficient_values(start);
  const std::size_t n = start_values.size();
  const Parameterization param(start_values);

  std::vector<TraceEntry> trace;
  auto eval = [&](const std::vector<double>& z) {
    std::vector<double> values = param.decode(z);
    const double f = objective(make_coefficients(law, values), records, config);
    trace.push_back({trace.size(), std::move(values), f});
    return f;
  };
  // The start is recorded exactly as given (decode(encode(x)) may differ in the last ulp).
  trace.push_back({0, start_values, objective(start, records, config)});
  if (max_iters == 0) return detail::finish(law, "local_refine", std::move(trace), 0);

  // Adaptive coefficients for higher dimensions (Gao and Han).
  const double dn = static_cast<double>(n);
  const double reflect = 1.0;
  const double expand = 1.0 + 2.0 / dn;
  const double contract = 0.75 - 1.0 / (2.0 * dn);
  const double shrink = 1.0 - 1.0 / dn;

  std::vector<Vertex> simplex;
  auto build_simplex = [&](std::vector<double> center, double center_value) {
    simplex.clear();
    simplex.push_back({center, center_value});
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> z = center;
      z[i] += kInitialStep;
      const double f = eval(z);
      simplex.push_back({std::move(z), f});
    }
  };
  build_simplex(param.encode(start_values), trace.front().objective);

  auto order = [&] {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Vertex& a, const Vertex& b) { return a.value < b.value; });
  };
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t v = 1; v < simplex.size(); ++v) {
      for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(simplex[v].z[i] - simplex[0].z[i]));
    }
    return d;
  };

  double restart_value = trace.front().objective;
  std::vector<double> centroid(n), trial(n);
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    order();
    if (diameter() < tolerance) {
      // Converged; restart once around the best vertex and stop if that
      // brought nothing.
      if (!(simplex[0].value < restart_value)) break;
      restart_value = simplex[0].value;
      build_simplex(simplex[0].z, simplex[0].value);
      continue;
    }
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].z[i] / dn;
    }
    Vertex& worst = simplex[n];
    auto point_along = [&](double t) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = centroid[i] + t * (centroid[i] - worst.z[i]);
      return trial;
    };

    std::vector<double> zr = point_along(reflect);
    const double fr = eval(zr);
    if (fr < simplex[0].value) {
      std::vector<double> ze = point_along(reflect * expand);
      const double fe = eval(ze);
      worst = fe < fr ? Vertex{std::move(ze), fe} : Vertex{std::move(zr), fr};
    } else if (fr < simplex[n - 1].value) {
      worst = {std::move(zr), fr};
    } else {
      const bool outside = fr < worst.value;
      std::vector<double> zc = point_along(outside ? reflect * contract : -contract);
      const double fc = eval(zc);
      if (fc < std::min(fr, worst.value)) {
        worst = {std::move(zc), fc};
      } else {
        for (std::size_t v = 1; v <= n; ++v) {
          for (std::size_t i = 0; i < n; ++i) {
            simplex[v].z[i] = simplex[0].z[i] + shrink * (simplex[v].z[i] - simplex[0].z[i]);
          }
          simplex[v].value = eval(simplex[v].z);
        }
      }
    }
  }
  return detail::finish(law, "local_refine", std::move(trace), 0);
}

}  // namespace scalelaw
