// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <string>

#include "scalelaw/error.hpp"
#include "scalelaw/fit.hpp"

namespace scalelaw {
namespace {

bool is_exponent(LawId law, std::string_view name) {
  switch (law) {
    case LawId::kaplan:
      return name == "alpha_N" || name == "alpha_D";
    case LawId::hoffmann:
      return name == "alpha" || name == "beta";
    case LawId::frantar:
      return name == "b_S" || name == "b_N" || name == "b_D";
    case LawId::frantar_reform:
      return name == "b_S" || name == "alpha" || name == "beta";
    case LawId::abnar:
      return name == "alpha" || name == "beta" || name == "lambda" || name == "delta" || name == "gamma";
    case LawId::generalized:
      return name == "alpha" || name == "beta" || name == "gamma";
  }
  return false;
}

std::string_view scale_name(AxisScale s) { return s == AxisScale::linear ? "linear" : "log"; }

}  // namespace

SearchSpace::SearchSpace(LawId law, std::vector<SearchAxis> axes) : law_(law) {
  const auto names = coefficient_names(law);
  if (axes.size() != names.size()) {
    throw DomainError("search space for " + std::string(law_name(law)) + " needs " + std::to_string(names.size()) +
                      " coefficients, got " + std::to_string(axes.size()));
  }
  for (auto name : names) {
    const auto count = std::count_if(axes.begin(), axes.end(), [&](const SearchAxis& a) { return a.name == name; });
    if (count != 1) {
      throw DomainError("search space must list coefficient '" + std::string(name) + "' exactly once");
    }
    const auto& axis = *std::find_if(axes.begin(), axes.end(), [&](const SearchAxis& a) { return a.name == name; });
    if (!(std::isfinite(axis.lower) && std::isfinite(axis.upper) && axis.lower < axis.upper)) {
      throw DomainError("search axis '" + axis.name + "' needs finite lower < upper");
    }
    if (axis.scale == AxisScale::logarithmic && !(axis.lower > 0.0)) {
      throw DomainError("log-scaled axis '" + axis.name + "' needs positive bounds");
    }
    axes_.push_back(axis);
  }
}

SearchSpace SearchSpace::defaults(LawId law) {
  const auto names = coefficient_names(law);
  const auto values = coefficient_values(published_coefficients(law));
  std::vector<SearchAxis> axes;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double lo = std::min(values[i] / 10.0, values[i] * 10.0);
    const double hi = std::max(values[i] / 10.0, values[i] * 10.0);
    axes.push_back({std::string(names[i]), lo, hi,
                    is_exponent(law, names[i]) ? AxisScale::linear : AxisScale::logarithmic});
  }
  return SearchSpace(law, std::move(axes));
}

SearchSpace SearchSpace::from_json(LawId law, const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("search space must be a JSON object");
  std::vector<SearchAxis> axes;
  for (const auto& item : doc.items()) {
    const auto& entry = item.value();
    if (!entry.is_object() || !entry.contains("lower") || !entry.contains("upper") || !entry["lower"].is_number() ||
        !entry["upper"].is_number()) {
      throw ParseError("search axis '" + item.key() + "' needs numeric lower and upper");
    }
    AxisScale scale = AxisScale::linear;
    if (entry.contains("scale")) {
      if (!entry["scale"].is_string()) throw ParseError("search axis '" + item.key() + "': scale must be a string");
      const auto s = entry["scale"].get<std::string>();
      if (s == "log" || s == "logarithmic") {
        scale = AxisScale::logarithmic;
      } else if (s != "linear") {
        throw ParseError("search axis '" + item.key() + "': unknown scale '" + s + "'");
      }
    }
    axes.push_back({item.key(), entry["lower"].get<double>(), entry["upper"].get<double>(), scale});
  }
  try {
    return SearchSpace(law, std::move(axes));
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

nlohmann::json SearchSpace::to_json() const {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& a : axes_) {
    doc[a.name] = {{"lower", a.lower}, {"upper", a.upper}, {"scale", std::string(scale_name(a.scale))}};
  }
  return doc;
}

std::vector<double> SearchSpace::from_unit(std::span<const double> unit) const {
  std::vector<double> out(axes_.size());
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    const auto& a = axes_[i];
    const double u = std::clamp(unit[i], 0.0, 1.0);
    if (a.scale == AxisScale::logarithmic) {
      const double llo = std::log(a.lower);
      out[i] = std::exp(llo + u * (std::log(a.upper) - llo));
    } else {
      out[i] = a.lower + u * (a.upper - a.lower);
    }
    out[i] = std::clamp(out[i], a.lower, a.upper);
  }
  return out;
}

std::vector<double> SearchSpace::to_unit(std::span<const double> values) const {
  std::vector<double> out(axes_.size());
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    const auto& a = axes_[i];
    if (a.scale == AxisScale::logarithmic) {
      const double llo = std::log(a.lower);
      out[i] = (std::log(values[i]) - llo) / (std::log(a.upper) - llo);
    } else {
      out[i] = (values[i] - a.lower) / (a.upper - a.lower);
    }
  }
  return out;
}

bool SearchSpace::contains(std::span<const double> values) const {
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (!(values[i] >= axes_[i].lower && values[i] <= axes_[i].upper)) return false;
  }
  return true;
}

}  // namespace scalelaw
