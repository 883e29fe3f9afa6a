// SPDX-License-Identifier: Apache-2.0
#include "scalelaw/grids.hpp"

#include <array>
#include <cmath>
#include <string>

#include "scalelaw/error.hpp"

namespace scalelaw {

std::string_view grid_name(GridSource source) {
  switch (source) {
    case GridSource::hoffmann9:
      return "hoffmann9";
    case GridSource::frantar48:
      return "frantar48";
    case GridSource::abnar35:
      return "abnar35";
  }
  return "unknown";
}

GridSource parse_grid_source(std::string_view name) {
  for (auto g : {GridSource::hoffmann9, GridSource::frantar48, GridSource::abnar35}) {
    if (grid_name(g) == name) return g;
  }
  throw ParseError("unknown grid '" + std::string(name) + "' (expected hoffmann9, frantar48 or abnar35)");
}

std::vector<double> log_space(double lo, double hi, std::size_t count) {
  if (count < 2) throw DomainError("log_space needs at least 2 points");
  std::vector<double> out(count);
  const double llo = std::log(lo);
  const double step = (std::log(hi) - llo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = std::exp(llo + step * static_cast<double>(i));
  // Pin the endpoints so range checks hold exactly.
  out.front() = lo;
  out.back() = hi;
  return out;
}

ReferenceGrid reference_grid(GridSource source) {
  ReferenceGrid grid{source, {}};
  switch (source) {
    case GridSource::hoffmann9: {
      const auto n = log_space(400e6, 10e12, 9);
      const auto d = log_space(8e9, 216.2e9, 9);
      for (std::size_t i = 0; i < 9; ++i) grid.scales.push_back({n[i], d[i], 0.0});
      break;
    }
    case GridSource::frantar48: {
      const auto n = log_space(1.3e6, 85e6, 4);
      const auto d = log_space(16e9, 65e9, 3);
      constexpr std::array<double, 4> sparsities = {0.0, 0.5, 0.75, 0.875};
      for (double ni : n) {
        for (double di : d) {
          for (double s : sparsities) grid.scales.push_back({ni, di, s});
        }
      }
      break;
    }
    case GridSource::abnar35: {
      // One (N, D) pair per budget, so every budget is exactly 6 N D.
      const auto n = log_space(329e6, 21.2e9, 5);
      const auto d = log_space(15e9, 128e9, 5);
      constexpr std::array<double, 7> sparsities = {0.0, 0.25, 0.5, 0.75, 0.90, 0.95, 0.98};
      for (std::size_t b = 0; b < 5; ++b) {
        for (double s : sparsities) grid.scales.push_back({n[b], d[b], s});
      }
      break;
    }
  }
  return grid;
}

}  // namespace scalelaw
