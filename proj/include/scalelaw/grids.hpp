// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>
#include <vector>

#include "scalelaw/types.hpp"

namespace scalelaw {

/// Test-model grids reconstructed from the published parameter, token and
/// sparsity ranges of the three reference studies.
enum class GridSource { hoffmann9, frantar48, abnar35 };

struct ReferenceGrid {
  GridSource source;
  std::vector<ModelScale> scales;
};

std::string_view grid_name(GridSource source);
/// Throws ParseError on an unknown name.
GridSource parse_grid_source(std::string_view name);

/// hoffmann9: 9 dense (N, D) pairs, log-spaced together over
///   N in [400M, 10T], D in [8B, 216.2B].
/// frantar48: 4 nonzero-parameter counts x 3 token counts x 4 sparsities
///   {0, 0.5, 0.75, 0.875}; counts log-spaced over [1.3M, 85M] and [16B, 65B].
/// abnar35: 5 compute budgets x 7 sparsities {0, .25, .5, .75, .9, .95, .98};
///   per budget (N, D) is log-interpolated over [329M, 21.2B] x [15B, 128B].
ReferenceGrid reference_grid(GridSource source);

/// `count` points log-spaced from lo to hi inclusive (count >= 2).
std::vector<double> log_space(double lo, double hi, std::size_t count);

}  // namespace scalelaw
