// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "scalelaw/coefficients.hpp"
#include "scalelaw/types.hpp"

namespace scalelaw {

// Closed-form loss predictions. All evaluators require n >= 1, d >= 1 and,
// for the sparse laws, 0 <= s <= 1 - 1e-9; violations throw DomainError.
// Infinite counts are allowed and give the large-scale limit.

double eval_kaplan(const KaplanCoefficients& k, double n, double d);
double eval_hoffmann(const HoffmannCoefficients& h, double n, double d);
/// n counts nonzero parameters.
double eval_frantar(const FrantarCoefficients& f, double n, double d, double s);
double eval_frantar_reform(const FrantarReformCoefficients& f, double n, double d, double s);
/// n counts active parameters.
double eval_abnar(const AbnarCoefficients& m, double n, double d, double s);
/// n counts active parameters.
double eval_generalized(const GeneralizedCoefficients& g, double n, double d, double s);

/// Dispatch on the coefficient variant. The dense laws (kaplan, hoffmann)
/// ignore scale.sparsity beyond validating it.
double evaluate(const CoefficientSet& coeffs, const ModelScale& scale);

/// Rename the pruning-law coefficients into dense-law symbols:
/// c -> e, b_N -> alpha, b_D -> beta, a_D^b_D -> b.
FrantarReformCoefficients reformat_frantar(const FrantarCoefficients& f);

/// (total - active) / total. Requires total >= active >= 1.
double sparsity_from_counts(double total, double active);
/// (E - K) / E over expert counts. Requires E >= K >= 1.
double sparsity_from_experts(double total_experts, double active_experts);

/// C = 6 N D. Pass active (nonzero) parameters for the sparse laws.
ComputeBudget compute_flops(double n, double d);

}  // namespace scalelaw
