// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <string>

#include "fit_internal.hpp"
#include "scalelaw/error.hpp"
#include "scalelaw/random.hpp"

namespace scalelaw {
namespace {

constexpr double kMaxGridPoints = 1e7;

std::vector<TraceEntry> to_trace(std::vector<std::vector<double>> candidates, const std::vector<double>& scores) {
  std::vector<TraceEntry> trace;
  trace.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    trace.push_back(TraceEntry{i, std::move(candidates[i]), scores[i]});
  }
  return trace;
}

}  // namespace

FitResult grid_search(const SearchSpace& space, std::span<const ExperimentRecord> records,
                      const FitObjectiveConfig& config, std::size_t points_per_dim, const ParallelOptions& parallel) {
  detail::require_records(records);
  if (points_per_dim < 2) throw DomainError("grid search needs at least 2 points per dimension");
  const std::size_t dims = space.dims();
  if (std::pow(static_cast<double>(points_per_dim), static_cast<double>(dims)) > kMaxGridPoints) {
    throw DomainError("grid of " + std::to_string(points_per_dim) + "^" + std::to_string(dims) +
                      " points exceeds the 1e7 evaluation limit");
  }
  std::size_t total = 1;
  for (std::size_t i = 0; i < dims; ++i) total *= points_per_dim;

  std::vector<std::vector<double>> candidates;
  candidates.reserve(total);
  std::vector<std::size_t> digits(dims, 0);
  std::vector<double> unit(dims);
  const double step = 1.0 / static_cast<double>(points_per_dim - 1);
  for (std::size_t k = 0; k < total; ++k) {
    // Row-major: the last axis varies fastest.
    std::size_t rem = k;
    for (std::size_t i = dims; i-- > 0;) {
      digits[i] = rem % points_per_dim;
      rem /= points_per_dim;
    }
    for (std::size_t i = 0; i < dims; ++i) unit[i] = static_cast<double>(digits[i]) * step;
    candidates.push_back(space.from_unit(unit));
  }
  const auto scores = detail::evaluate_candidates(space.law(), candidates, records, config, parallel.workers);
  return detail::finish(space.law(), "grid", to_trace(std::move(candidates), scores), 0);
}

FitResult random_search(const SearchSpace& space, std::span<const ExperimentRecord> records,
                        const FitObjectiveConfig& config, std::size_t budget, std::uint64_t seed,
                        const ParallelOptions& parallel) {
  detail::require_records(records);
  if (budget < 1) throw DomainError("random search budget must be >= 1");
  Rng rng(seed);
  std::vector<std::vector<double>> candidates;
  candidates.reserve(budget);
  std::vector<double> unit(space.dims());
  for (std::size_t k = 0; k < budget; ++k) {
    for (double& u : unit) u = unit_uniform(rng);
    candidates.push_back(space.from_unit(unit));
  }
  const auto scores = detail::evaluate_candidates(space.law(), candidates, records, config, parallel.workers);
  return detail::finish(space.law(), "random", to_trace(std::move(candidates), scores), seed);
}

}  // namespace scalelaw
