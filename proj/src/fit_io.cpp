// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>
#include <sstream>

#include "scalelaw/error.hpp"
#include "scalelaw/fit.hpp"

namespace scalelaw {
namespace {

// JSON has no infinity; infeasible objectives are written as null.
nlohmann::json objective_json(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

double objective_from(const nlohmann::json& v) {
  if (v.is_null()) return std::numeric_limits<double>::infinity();
  if (!v.is_number()) throw ParseError("objective must be a number or null");
  return v.get<double>();
}

}  // namespace

std::string_view metric_name(FitMetric metric) {
  switch (metric) {
    case FitMetric::mse:
      return "mse";
    case FitMetric::huber:
      return "huber";
    case FitMetric::log_mse:
      return "log_mse";
  }
  return "unknown";
}

FitMetric parse_metric(std::string_view name) {
  for (auto m : {FitMetric::mse, FitMetric::huber, FitMetric::log_mse}) {
    if (metric_name(m) == name) return m;
  }
  throw ParseError("unknown metric '" + std::string(name) + "' (expected mse, huber or log_mse)");
}

nlohmann::json to_json(const FitResult& result) {
  const auto names = coefficient_names(result.law);
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& entry : result.trace) {
    nlohmann::json candidate = nlohmann::json::object();
    for (std::size_t i = 0; i < names.size(); ++i) candidate[std::string(names[i])] = entry.candidate[i];
    trace.push_back({{"index", entry.index}, {"objective", objective_json(entry.objective)}, {"candidate", candidate}});
  }
  return nlohmann::json{{"law", std::string(law_name(result.law))},
                        {"method", result.method},
                        {"seed", result.seed},
                        {"objective", objective_json(result.objective)},
                        {"evaluations", result.evaluations},
                        {"coefficients", to_json(result.coefficients)["coefficients"]},
                        {"trace", trace}};
}

FitResult fit_result_from_json(const nlohmann::json& doc) {
  try {
    FitResult result;
    result.law = parse_law(doc.at("law").get<std::string>());
    result.method = doc.at("method").get<std::string>();
    result.seed = doc.at("seed").get<std::uint64_t>();
    result.objective = objective_from(doc.at("objective"));
    result.evaluations = doc.at("evaluations").get<std::size_t>();
    result.coefficients =
        coefficients_from_json({{"law", doc.at("law")}, {"coefficients", doc.at("coefficients")}});
    const auto names = coefficient_names(result.law);
    for (const auto& item : doc.at("trace")) {
      TraceEntry entry;
      entry.index = item.at("index").get<std::size_t>();
      entry.objective = objective_from(item.at("objective"));
      for (auto name : names) entry.candidate.push_back(item.at("candidate").at(std::string(name)).get<double>());
      result.trace.push_back(std::move(entry));
    }
    return result;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("fit result: ") + e.what());
  }
}

std::string trace_csv(const FitResult& result) {
  std::ostringstream out;
  out.precision(17);
  out << "index,objective";
  for (auto name : coefficient_names(result.law)) out << ',' << name;
  out << '\n';
  for (const auto& entry : result.trace) {
    out << entry.index << ',' << entry.objective;
    for (double v : entry.candidate) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

}  // namespace scalelaw
