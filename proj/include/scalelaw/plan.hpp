// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string_view>
#include <utility>

#include <nlohmann/json.hpp>

#include "scalelaw/coefficients.hpp"
#include "scalelaw/types.hpp"

namespace scalelaw {

enum class PlanMethod { closed_form, numeric };

/// Compute-optimal (N, D) for a budget at a fixed sparsity. n_opt and d_opt
/// are real-valued; 6 n_opt d_opt equals the budget.
struct AllocationPlan {
  ComputeBudget budget;
  double sparsity = 0.0;
  double n_opt = 0.0;
  double d_opt = 0.0;
  double predicted_loss = 0.0;
  PlanMethod method = PlanMethod::closed_form;

  friend bool operator==(const AllocationPlan&, const AllocationPlan&) = default;
};

/// Minimizer of e + a/N^alpha + b/D^beta under C = 6 N D:
/// N = (a alpha / (b beta))^(1/(alpha+beta)) (C/6)^(beta/(alpha+beta)).
AllocationPlan optimal_allocation_dense(const HoffmannCoefficients& coeffs, ComputeBudget c);

/// Same closed form with a replaced by a (1-s)^alpha + c s; the entropy term
/// does not move the argmin. Compute counts active parameters.
AllocationPlan optimal_allocation_sparse(const GeneralizedCoefficients& coeffs, ComputeBudget c, double s);

/// Any law: Brent minimization of the loss over log N along the budget
/// constraint, N in [1, C/6].
AllocationPlan optimal_allocation_numeric(const CoefficientSet& coeffs, ComputeBudget c, double s);

/// Closed form for hoffmann and generalized, numeric otherwise.
AllocationPlan optimal_allocation(const CoefficientSet& coeffs, ComputeBudget c, double s);

/// Best sparsity on a grid (ties go to the smaller sparsity).
std::pair<double, AllocationPlan> optimal_sparsity(const GeneralizedCoefficients& coeffs, ComputeBudget c,
                                                   std::span<const double> s_grid);

struct ScalingGuidance {
  double param_multiplier = 1.0;
  double data_multiplier = 1.0;
};

/// Kaplan's rule of thumb: 10x compute -> 5.5x parameters, 1.8x data,
/// extended as a power law to any multiplier.
ScalingGuidance kaplan_guidance(double compute_multiplier);

std::string_view plan_method_name(PlanMethod method);
nlohmann::json to_json(const AllocationPlan& plan);
AllocationPlan allocation_plan_from_json(const nlohmann::json& doc);

}  // namespace scalelaw
