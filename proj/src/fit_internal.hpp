// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "scalelaw/fit.hpp"

namespace scalelaw::detail {

/// Per-record residuals (prediction minus observation, in the configured
/// space); empty when some prediction is unusable, i.e. the objective is +inf.
std::vector<double> residuals(const CoefficientSet& coeffs, std::span<const ExperimentRecord> records,
                              const FitObjectiveConfig& config);

/// Mean per-record metric of a residual vector; +inf for an empty one.
double aggregate(std::span<const double> residuals, const FitObjectiveConfig& config);

/// Per-record metric of one residual.
double metric_value(double residual, const FitObjectiveConfig& config);

/// Residual vectors for each candidate, merged by candidate index.
std::vector<std::vector<double>> evaluate_residuals(LawId law, const std::vector<std::vector<double>>& candidates,
                                                    std::span<const ExperimentRecord> records,
                                                    const FitObjectiveConfig& config, std::size_t workers);

/// Objective for each candidate (coefficient values in table order), merged
/// by candidate index.
std::vector<double> evaluate_candidates(LawId law, const std::vector<std::vector<double>>& candidates,
                                        std::span<const ExperimentRecord> records,
                                        const FitObjectiveConfig& config, std::size_t workers);

/// Lowest objective wins; ties go to the lowest evaluation index.
std::size_t best_index(std::span<const TraceEntry> trace);

FitResult finish(LawId law, std::string method, std::vector<TraceEntry> trace, std::uint64_t seed);

void require_records(std::span<const ExperimentRecord> records);

}  // namespace scalelaw::detail
