// SPDX-License-Identifier: Apache-2.0
#include "scalelaw/coefficients.hpp"

#include <cmath>
#include <string>

#include "scalelaw/error.hpp"

namespace scalelaw {
namespace {

template <class T>
std::span<const std::string_view> names_of() {
  return {T::kNames.data(), T::kNames.size()};
}

template <class T>
CoefficientSet from_flat(std::span<const double> values) {
  if (values.size() != T::kNames.size()) {
    throw DomainError(std::string(law_name(T::kLaw)) + " expects " + std::to_string(T::kNames.size()) +
                      " coefficients, got " + std::to_string(values.size()));
  }
  return T::from_values(values);
}

}  // namespace

std::string_view law_name(LawId law) {
  switch (law) {
    case LawId::kaplan:
      return "kaplan";
    case LawId::hoffmann:
      return "hoffmann";
    case LawId::frantar:
      return "frantar";
    case LawId::frantar_reform:
      return "frantar_reform";
    case LawId::abnar:
      return "abnar";
    case LawId::generalized:
      return "generalized";
  }
  return "unknown";
}

LawId parse_law(std::string_view name) {
  for (LawId law : kAllLaws) {
    if (law_name(law) == name) return law;
  }
  throw ParseError("unknown law '" + std::string(name) +
                   "' (expected kaplan, hoffmann, frantar, frantar_reform, abnar or generalized)");
}

LawId law_of(const CoefficientSet& coeffs) {
  return std::visit([](const auto& c) { return std::decay_t<decltype(c)>::kLaw; }, coeffs);
}

std::span<const std::string_view> coefficient_names(LawId law) {
  switch (law) {
    case LawId::kaplan:
      return names_of<KaplanCoefficients>();
    case LawId::hoffmann:
      return names_of<HoffmannCoefficients>();
    case LawId::frantar:
      return names_of<FrantarCoefficients>();
    case LawId::frantar_reform:
      return names_of<FrantarReformCoefficients>();
    case LawId::abnar:
      return names_of<AbnarCoefficients>();
    case LawId::generalized:
      return names_of<GeneralizedCoefficients>();
  }
  return {};
}

std::vector<double> coefficient_values(const CoefficientSet& coeffs) {
  return std::visit(
      [](const auto& c) {
        const auto v = c.values();
        return std::vector<double>(v.begin(), v.end());
      },
      coeffs);
}

CoefficientSet make_coefficients(LawId law, std::span<const double> values) {
  switch (law) {
    case LawId::kaplan:
      return from_flat<KaplanCoefficients>(values);
    case LawId::hoffmann:
      return from_flat<HoffmannCoefficients>(values);
    case LawId::frantar:
      return from_flat<FrantarCoefficients>(values);
    case LawId::frantar_reform:
      return from_flat<FrantarReformCoefficients>(values);
    case LawId::abnar:
      return from_flat<AbnarCoefficients>(values);
    case LawId::generalized:
      return from_flat<GeneralizedCoefficients>(values);
  }
  throw DomainError("unknown law");
}

CoefficientSet published_coefficients(LawId law) {
  switch (law) {
    case LawId::kaplan:
      return KaplanCoefficients{.alpha_n = 0.076, .alpha_d = 0.103, .n_c = 6.4e13, .d_c = 1.8e13};
    case LawId::hoffmann:
      return HoffmannCoefficients{.e = 1.69, .a = 406.4, .b = 410.7, .alpha = 0.34, .beta = 0.28};
    case LawId::frantar:
      return FrantarCoefficients{
          .a_s = 16.8, .b_s = 0.722, .c_s = 45, .b_n = 0.245, .a_d = 6.90e8, .b_d = 0.203, .c = 0.651};
    case LawId::frantar_reform:
      return FrantarReformCoefficients{
          .a_s = 16.8, .b_s = 0.722, .c_s = 45, .b = 62.271, .alpha = 0.245, .beta = 0.203, .e = 0.651};
    case LawId::abnar:
      return AbnarCoefficients{.e = 0.94,
                               .a = 16612.50,
                               .b = 5455.67,
                               .c = 0.4598,
                               .d_coef = 17.26,
                               .alpha = 0.5962,
                               .beta = 0.3954,
                               .lambda = -0.1666,
                               .delta = 0.1603,
                               .gamma = 0.1595};
    case LawId::generalized:
      return GeneralizedCoefficients{
          .e = 1.69, .a = 406.4, .b = 410.7, .c = 93.45, .alpha = 0.34, .beta = 0.28, .gamma = 1e-2};
  }
  throw DomainError("unknown law");
}

void validate(const CoefficientSet& coeffs) {
  const LawId law = law_of(coeffs);
  const auto names = coefficient_names(law);
  const auto values = coefficient_values(coeffs);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw DomainError(std::string(law_name(law)) + " coefficient " + std::string(names[i]) + " is not finite");
    }
  }
  auto require_positive = [&](std::string_view name, double v) {
    if (!(v > 0.0)) {
      throw DomainError(std::string(law_name(law)) + " exponent " + std::string(name) + " must be > 0");
    }
  };
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, KaplanCoefficients>) {
          require_positive("alpha_N", c.alpha_n);
          require_positive("alpha_D", c.alpha_d);
        } else if constexpr (std::is_same_v<T, HoffmannCoefficients> ||
                             std::is_same_v<T, FrantarReformCoefficients>) {
          require_positive("alpha", c.alpha);
          require_positive("beta", c.beta);
        } else if constexpr (std::is_same_v<T, FrantarCoefficients>) {
          require_positive("b_S", c.b_s);
          require_positive("b_N", c.b_n);
          require_positive("b_D", c.b_d);
        } else if constexpr (std::is_same_v<T, AbnarCoefficients>) {
          require_positive("alpha", c.alpha);
          require_positive("beta", c.beta);
          require_positive("delta", c.delta);
          require_positive("gamma", c.gamma);
        } else if constexpr (std::is_same_v<T, GeneralizedCoefficients>) {
          require_positive("alpha", c.alpha);
          require_positive("beta", c.beta);
          require_positive("gamma", c.gamma);
        }
      },
      coeffs);
}

nlohmann::json to_json(const CoefficientSet& coeffs) {
  const LawId law = law_of(coeffs);
  const auto names = coefficient_names(law);
  const auto values = coefficient_values(coeffs);
  nlohmann::json body = nlohmann::json::object();
  for (std::size_t i = 0; i < names.size(); ++i) body[std::string(names[i])] = values[i];
  return nlohmann::json{{"law", std::string(law_name(law))}, {"coefficients", body}};
}

CoefficientSet coefficients_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("law") || !doc["law"].is_string()) {
    throw ParseError("coefficient document needs a string \"law\" field");
  }
  const LawId law = parse_law(doc["law"].get<std::string>());
  if (!doc.contains("coefficients") || !doc["coefficients"].is_object()) {
    throw ParseError("coefficient document needs a \"coefficients\" object");
  }
  const auto& body = doc["coefficients"];
  const auto names = coefficient_names(law);
  std::vector<double> values;
  for (auto name : names) {
    const std::string key(name);
    if (!body.contains(key)) throw ParseError("missing coefficient '" + key + "' for law " + std::string(law_name(law)));
    if (!body[key].is_number()) throw ParseError("coefficient '" + key + "' is not a number");
    values.push_back(body[key].get<double>());
  }
  for (const auto& item : body.items()) {
    bool known = false;
    for (auto name : names) known = known || item.key() == name;
    if (!known) throw ParseError("unknown coefficient '" + item.key() + "' for law " + std::string(law_name(law)));
  }
  CoefficientSet coeffs = make_coefficients(law, values);
  try {
    validate(coeffs);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
  return coeffs;
}

}  // namespace scalelaw
