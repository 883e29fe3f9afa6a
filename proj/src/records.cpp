// SPDX-License-Identifier: Apache-2.0
#include "scalelaw/records.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "scalelaw/error.hpp"

namespace scalelaw {
namespace {

constexpr std::array<std::string_view, 6> kColumns = {"n_active", "d_tokens", "sparsity",
                                                      "loss",     "compute",  "source"};

enum Column { kN = 0, kD, kS, kLoss, kCompute, kSource };

struct Row {
  std::size_t number = 0;  // 1-based line number
  std::vector<std::string> fields;
};

// Minimal RFC 4180 reader: comma separated, double quotes escape commas and
// quotes. Blank lines are skipped.
std::vector<Row> split_rows(std::string_view text) {
  std::vector<Row> rows;
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    Row row;
    row.number = line;
    std::string field;
    bool any = false;
    bool quoted = false;
    for (; i < text.size(); ++i) {
      const char ch = text[i];
      if (quoted) {
        if (ch == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field.push_back('"');
            ++i;
          } else {
            quoted = false;
          }
        } else {
          if (ch == '\n') ++line;
          field.push_back(ch);
        }
        continue;
      }
      if (ch == '"') {
        quoted = true;
        any = true;
      } else if (ch == ',') {
        row.fields.push_back(std::move(field));
        field.clear();
        any = true;
      } else if (ch == '\n') {
        ++i;
        break;
      } else if (ch != '\r') {
        field.push_back(ch);
        any = true;
      }
    }
    if (quoted) throw ParseError("row " + std::to_string(row.number) + ": unterminated quoted field");
    if (any) {
      row.fields.push_back(std::move(field));
      rows.push_back(std::move(row));
    }
    ++line;
  }
  return rows;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::string where(std::size_t row, std::string_view column) {
  return "row " + std::to_string(row) + ", column '" + std::string(column) + "'";
}

double parse_number(std::string_view text, std::size_t row, std::string_view column) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ParseError(where(row, column) + ": malformed number '" + std::string(text) + "'");
  }
  return value;
}

double parse_count(std::string_view text, std::size_t row, std::string_view column) {
  const double v = parse_number(text, row, column);
  if (v < 1.0) throw ParseError(where(row, column) + ": count must be >= 1");
  if (v > kMaxExactCount) throw ParseError(where(row, column) + ": count exceeds 2^53");
  return v;
}

double parse_fraction(std::string_view text, std::size_t row) {
  const double v = parse_number(text, row, "sparsity");
  if (!(v >= 0.0 && v <= kMaxSparsity)) throw ParseError(where(row, "sparsity") + ": sparsity out of [0,1)");
  return v;
}

// Map header names to column indices; -1 for absent optional columns.
std::array<int, kColumns.size()> read_header(const Row& header, bool loss_required) {
  std::array<int, kColumns.size()> index;
  index.fill(-1);
  for (std::size_t i = 0; i < header.fields.size(); ++i) {
    const std::string_view name = trim(header.fields[i]);
    bool known = false;
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
      if (name == kColumns[c]) {
        if (index[c] >= 0) throw ParseError("row 1: duplicate column '" + std::string(name) + "'");
        index[c] = static_cast<int>(i);
        known = true;
      }
    }
    if (!known) throw ParseError("row 1: unknown column '" + std::string(name) + "'");
  }
  for (int c : {kN, kD, kS}) {
    if (index[c] < 0) throw ParseError("row 1: missing column '" + std::string(kColumns[c]) + "'");
  }
  if (loss_required && index[kLoss] < 0) throw ParseError("row 1: missing column 'loss'");
  return index;
}

const std::string& field(const Row& row, int column_index, std::size_t expected, Column column) {
  if (row.fields.size() != expected) {
    throw ParseError("row " + std::to_string(row.number) + ": expected " + std::to_string(expected) +
                     " fields, got " + std::to_string(row.fields.size()) + " (column '" +
                     std::string(kColumns[column]) + "')");
  }
  return row.fields[static_cast<std::size_t>(column_index)];
}

ModelScale read_scale(const Row& row, const std::array<int, kColumns.size()>& index, std::size_t width) {
  ModelScale scale;
  scale.n_active = parse_count(field(row, index[kN], width, kN), row.number, "n_active");
  scale.d_tokens = parse_count(field(row, index[kD], width, kD), row.number, "d_tokens");
  scale.sparsity = parse_fraction(field(row, index[kS], width, kS), row.number);
  return scale;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

void check_record(const ExperimentRecord& record) {
  check_scale(record.scale);
  if (!(record.loss > 0.0) || !std::isfinite(record.loss)) throw DomainError("loss must be finite and > 0");
  if (record.compute) {
    const double expected = 6.0 * record.scale.n_active * record.scale.d_tokens;
    const double c = record.compute->flops;
    if (!(c > 0.0) || std::abs(c - expected) / c > 0.01) {
      throw DomainError("compute differs from 6*n_active*d_tokens by more than 1%");
    }
  }
}

std::vector<ExperimentRecord> parse_records(std::string_view csv) {
  const auto rows = split_rows(csv);
  if (rows.empty()) throw ParseError("row 1: missing header");
  const auto index = read_header(rows.front(), true);
  const std::size_t width = rows.front().fields.size();

  std::vector<ExperimentRecord> records;
  records.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const Row& row = rows[r];
    ExperimentRecord rec;
    rec.scale = read_scale(row, index, width);
    rec.loss = parse_number(field(row, index[kLoss], width, kLoss), row.number, "loss");
    if (!(rec.loss > 0.0)) throw ParseError(where(row.number, "loss") + ": loss must be > 0");
    if (index[kCompute] >= 0) {
      const std::string_view text = trim(field(row, index[kCompute], width, kCompute));
      if (!text.empty()) rec.compute = ComputeBudget{parse_number(text, row.number, "compute")};
    }
    if (index[kSource] >= 0) rec.source = field(row, index[kSource], width, kSource);
    try {
      check_record(rec);
    } catch (const DomainError& e) {
      throw ParseError("row " + std::to_string(row.number) + ": " + e.what());
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<ModelScale> parse_scales(std::string_view csv) {
  const auto rows = split_rows(csv);
  if (rows.empty()) throw ParseError("row 1: missing header");
  const auto index = read_header(rows.front(), false);
  const std::size_t width = rows.front().fields.size();
  std::vector<ModelScale> scales;
  for (std::size_t r = 1; r < rows.size(); ++r) scales.push_back(read_scale(rows[r], index, width));
  return scales;
}

std::string write_records(const std::vector<ExperimentRecord>& records) {
  std::ostringstream out;
  out << "n_active,d_tokens,sparsity,loss,compute,source\n";
  for (const auto& r : records) {
    out << format_double(r.scale.n_active) << ',' << format_double(r.scale.d_tokens) << ','
        << format_double(r.scale.sparsity) << ',' << format_double(r.loss) << ','
        << (r.compute ? format_double(r.compute->flops) : std::string()) << ',' << quote_if_needed(r.source)
        << '\n';
  }
  return out.str();
}

std::string write_scales(const std::vector<ModelScale>& scales) {
  std::ostringstream out;
  out << "n_active,d_tokens,sparsity,loss\n";
  for (const auto& s : scales) {
    out << format_double(s.n_active) << ',' << format_double(s.d_tokens) << ',' << format_double(s.sparsity)
        << ",\n";
  }
  return out.str();
}

double derive_tokens_from_compute(ComputeBudget c, double n) { return c.flops / (6.0 * n); }

}  // namespace scalelaw
