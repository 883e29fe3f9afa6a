// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

namespace scalelaw {

/// Largest sparsity accepted anywhere. s = 1 would mean zero active parameters.
inline constexpr double kMaxSparsity = 1.0 - 1e-9;

/// Counts are stored as doubles; anything past 2^53 is no longer an exact
/// integer and is rejected by the parsers.
inline constexpr double kMaxExactCount = 9007199254740992.0;

/// A candidate model: active (nonzero) parameters, training tokens and
/// sparsity. Total parameters are n_active / (1 - sparsity).
struct ModelScale {
  double n_active = 1.0;
  double d_tokens = 1.0;
  double sparsity = 0.0;

  double total_parameters() const { return n_active / (1.0 - sparsity); }

  friend bool operator==(const ModelScale&, const ModelScale&) = default;
};

/// Training FLOPs.
struct ComputeBudget {
  double flops = 0.0;

  friend bool operator==(const ComputeBudget&, const ComputeBudget&) = default;
};

// Throw DomainError naming the violated bound.
void check_count(double value, const char* name);
void check_sparsity(double s);
void check_budget(ComputeBudget c);
void check_scale(const ModelScale& scale);

}  // namespace scalelaw
