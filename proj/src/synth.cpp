// SPDX-License-Identifier: Apache-2.0
#include "scalelaw/synth.hpp"

#include <string>

#include "scalelaw/error.hpp"
#include "scalelaw/laws.hpp"
#include "scalelaw/random.hpp"

namespace scalelaw {

std::vector<ExperimentRecord> synthesize_dataset(const CoefficientSet& coeffs, std::span<const ModelScale> grid,
                                                 double noise_rel, std::uint64_t seed) {
  if (!(noise_rel >= 0.0)) throw DomainError("noise_rel must be >= 0");
  Rng rng(seed);
  const std::string source = "synthetic:" + std::string(law_name(law_of(coeffs)));
  std::vector<ExperimentRecord> records;
  records.reserve(grid.size());
  for (const ModelScale& scale : grid) {
    const double clean = evaluate(coeffs, scale);
    const double eps = noise_rel > 0.0 ? noise_rel * truncated_normal(rng, kNoiseTruncation) : 0.0;
    records.push_back(ExperimentRecord{.scale = scale,
                                       .loss = clean * (1.0 + eps),
                                       .compute = ComputeBudget{6.0 * scale.n_active * scale.d_tokens},
                                       .source = source});
  }
  return records;
}

}  // namespace scalelaw
