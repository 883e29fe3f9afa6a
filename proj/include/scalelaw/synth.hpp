// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scalelaw/coefficients.hpp"
#include "scalelaw/records.hpp"

namespace scalelaw {

/// Noise draws are truncated at this many standard deviations.
inline constexpr double kNoiseTruncation = 3.0;

/// loss_i = law(scale_i) * (1 + eps_i), eps_i ~ N(0, noise_rel^2) truncated to
/// +-3 noise_rel. Deterministic for a fixed seed. Records carry compute = 6 N D
/// and source "synthetic:<law>".
std::vector<ExperimentRecord> synthesize_dataset(const CoefficientSet& coeffs, std::span<const ModelScale> grid,
                                                 double noise_rel, std::uint64_t seed);

}  // namespace scalelaw
