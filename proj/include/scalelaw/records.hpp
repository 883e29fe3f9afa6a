// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scalelaw/types.hpp"

namespace scalelaw {

/// One observed training run: the unit of fitting data.
struct ExperimentRecord {
  ModelScale scale;
  double loss = 0.0;
  std::optional<ComputeBudget> compute;
  std::string source;

  friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

/// Throws DomainError if loss <= 0, the scale is invalid, or a present
/// compute value is more than 1% away from 6 N D.
void check_record(const ExperimentRecord& record);

/// Parse CSV with header columns n_active, d_tokens, sparsity, loss and the
/// optional compute, source columns (any order). Numbers use '.' decimals and
/// may be scientific. Errors are ParseError naming the row (header = row 1)
/// and the column.
std::vector<ExperimentRecord> parse_records(std::string_view csv);

/// Same schema; loss column is optional and ignored. Used for exported grids.
std::vector<ModelScale> parse_scales(std::string_view csv);

/// Inverse of parse_records; numbers use shortest round-trip form.
std::string write_records(const std::vector<ExperimentRecord>& records);

/// Grid export: the record schema with an empty loss column.
std::string write_scales(const std::vector<ModelScale>& scales);

/// Inverse of C = 6 N D.
double derive_tokens_from_compute(ComputeBudget c, double n);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace scalelaw
