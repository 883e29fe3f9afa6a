// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scalelaw/coefficients.hpp"
#include "scalelaw/records.hpp"

namespace scalelaw {

enum class AxisScale { linear, logarithmic };

struct SearchAxis {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
  AxisScale scale = AxisScale::linear;
};

/// Box over the coefficients of one law. Each axis maps to [0, 1] linearly or
/// in log space; optimizers work in that unit hypercube.
class SearchSpace {
 public:
  /// Axes must name every coefficient of `law` exactly once (any order; they
  /// are stored in table order). Throws DomainError otherwise, or when
  /// lower >= upper, or a log axis has a non-positive bound.
  SearchSpace(LawId law, std::vector<SearchAxis> axes);

  /// [v/10, 10 v] around each published value; log scale for scale
  /// constants, linear for exponents.
  static SearchSpace defaults(LawId law);

  /// {coefficient: {"lower": x, "upper": y, "scale": "linear"|"log"}}.
  /// Throws ParseError.
  static SearchSpace from_json(LawId law, const nlohmann::json& doc);
  nlohmann::json to_json() const;

  LawId law() const { return law_; }
  std::size_t dims() const { return axes_.size(); }
  std::span<const SearchAxis> axes() const { return axes_; }

  std::vector<double> from_unit(std::span<const double> unit) const;
  std::vector<double> to_unit(std::span<const double> values) const;
  bool contains(std::span<const double> values) const;

 private:
  LawId law_;
  std::vector<SearchAxis> axes_;
};

enum class FitMetric { mse, huber, log_mse };
enum class LossSpace { loss, log_loss };

/// The default is squared error on log losses. log_mse always compares logs
/// regardless of `space`.
struct FitObjectiveConfig {
  FitMetric metric = FitMetric::mse;
  double huber_delta = 1.0;
  LossSpace space = LossSpace::log_loss;
};

struct TraceEntry {
  std::size_t index = 0;
  std::vector<double> candidate;
  double objective = 0.0;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct FitResult {
  LawId law = LawId::hoffmann;
  std::string method;
  CoefficientSet coefficients;
  double objective = 0.0;
  std::size_t evaluations = 0;
  std::vector<TraceEntry> trace;
  std::uint64_t seed = 0;

  friend bool operator==(const FitResult&, const FitResult&) = default;
};

/// Candidate evaluations inside one optimizer step may fan out to this many
/// threads. Results are merged by candidate index, so outputs never depend on
/// the worker count.
struct ParallelOptions {
  std::size_t workers = 1;
};

/// Mean per-record metric between predicted and observed loss. Candidates
/// whose prediction is not finite (or not positive, in log space) score
/// +infinity. Throws DomainError on empty records or an invalid record
/// (message names the record index).
double objective(const CoefficientSet& coeffs, std::span<const ExperimentRecord> records,
                 const FitObjectiveConfig& config);

/// Full Cartesian grid, first axis slowest. Rejects points_per_dim < 2 and
/// grids above 1e7 points.
FitResult grid_search(const SearchSpace& space, std::span<const ExperimentRecord> records,
                      const FitObjectiveConfig& config, std::size_t points_per_dim,
                      const ParallelOptions& parallel = {});

/// `budget` uniform samples in the unit cube of `space`.
FitResult random_search(const SearchSpace& space, std::span<const ExperimentRecord> records,
                        const FitObjectiveConfig& config, std::size_t budget, std::uint64_t seed,
                        const ParallelOptions& parallel = {});

/// Sequential model-based optimization: a Latin-hypercube design of
/// init_samples points, then one surrogate-guided point per iteration until
/// `budget` evaluations. The surrogate is a Gaussian process on log objective
/// values; the next point minimizes a lower confidence bound over global
/// samples and a trust region around the incumbent. Requires
/// budget > init_samples >= 2.
FitResult smbo_fit(const SearchSpace& space, std::span<const ExperimentRecord> records,
                   const FitObjectiveConfig& config, std::size_t budget, std::size_t init_samples,
                   std::uint64_t seed, const ParallelOptions& parallel = {});

/// Nelder-Mead from `start` in a per-coefficient log-magnitude parameterization
/// (signs are preserved). Stops when the simplex diameter falls below
/// `tolerance` and a restart brings no improvement, or after max_iters
/// iterations. Never returns worse than `start`.
FitResult local_refine(const CoefficientSet& start, std::span<const ExperimentRecord> records,
                       const FitObjectiveConfig& config, std::size_t max_iters, double tolerance);

/// Fit only the sparsity factor c of the generalized law, with e, a, b,
/// alpha, beta from `base` and the given gamma. Every record must have
/// sparsity > 0.
double fit_sparsity_factor(std::span<const ExperimentRecord> records, const HoffmannCoefficients& base,
                           double gamma, const FitObjectiveConfig& config = {});

nlohmann::json to_json(const FitResult& result);
FitResult fit_result_from_json(const nlohmann::json& doc);

/// Columns: index, objective, then one column per coefficient.
std::string trace_csv(const FitResult& result);

std::string_view metric_name(FitMetric metric);
FitMetric parse_metric(std::string_view name);

}  // namespace scalelaw
