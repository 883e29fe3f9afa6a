// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace scalelaw {

/// The six scaling laws. The enumerator order matches the alternative order
/// of CoefficientSet.
enum class LawId {
  kaplan,
  hoffmann,
  frantar,
  frantar_reform,
  abnar,
  generalized,
};

inline constexpr std::array<LawId, 6> kAllLaws = {
    LawId::kaplan,         LawId::hoffmann, LawId::frantar,
    LawId::frantar_reform, LawId::abnar,    LawId::generalized};

std::string_view law_name(LawId law);
/// Throws ParseError on an unknown id.
LawId parse_law(std::string_view name);

/// L = [(N_C/N)^(alpha_N/alpha_D) + D_C/D]^alpha_D
struct KaplanCoefficients {
  static constexpr LawId kLaw = LawId::kaplan;
  static constexpr std::array<std::string_view, 4> kNames = {"alpha_N", "alpha_D", "N_C", "D_C"};

  double alpha_n = 0.0;
  double alpha_d = 0.0;
  double n_c = 0.0;
  double d_c = 0.0;

  std::array<double, 4> values() const { return {alpha_n, alpha_d, n_c, d_c}; }
  static KaplanCoefficients from_values(std::span<const double> v) { return {v[0], v[1], v[2], v[3]}; }
  friend bool operator==(const KaplanCoefficients&, const KaplanCoefficients&) = default;
};

/// L = e + a/N^alpha + b/D^beta
struct HoffmannCoefficients {
  static constexpr LawId kLaw = LawId::hoffmann;
  static constexpr std::array<std::string_view, 5> kNames = {"e", "a", "b", "alpha", "beta"};

  double e = 0.0;
  double a = 0.0;
  double b = 0.0;
  double alpha = 0.0;
  double beta = 0.0;

  std::array<double, 5> values() const { return {e, a, b, alpha, beta}; }
  static HoffmannCoefficients from_values(std::span<const double> v) { return {v[0], v[1], v[2], v[3], v[4]}; }
  friend bool operator==(const HoffmannCoefficients&, const HoffmannCoefficients&) = default;
};

/// L = (a_S (1-S)^b_S + c_S) (1/N)^b_N + (a_D/D)^b_D + c, N = nonzero parameters.
struct FrantarCoefficients {
  static constexpr LawId kLaw = LawId::frantar;
  static constexpr std::array<std::string_view, 7> kNames = {"a_S", "b_S", "c_S", "b_N", "a_D", "b_D", "c"};

  double a_s = 0.0;
  double b_s = 0.0;
  double c_s = 0.0;
  double b_n = 0.0;
  double a_d = 0.0;
  double b_d = 0.0;
  double c = 0.0;

  std::array<double, 7> values() const { return {a_s, b_s, c_s, b_n, a_d, b_d, c}; }
  static FrantarCoefficients from_values(std::span<const double> v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
  }
  friend bool operator==(const FrantarCoefficients&, const FrantarCoefficients&) = default;
};

/// The pruning law rewritten in dense-law symbols:
/// L = e + (a_S (1-S)^b_S + c_S)/N^alpha + b/D^beta
struct FrantarReformCoefficients {
  static constexpr LawId kLaw = LawId::frantar_reform;
  static constexpr std::array<std::string_view, 7> kNames = {"a_S", "b_S", "c_S", "b", "alpha", "beta", "e"};

  double a_s = 0.0;
  double b_s = 0.0;
  double c_s = 0.0;
  double b = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double e = 0.0;

  std::array<double, 7> values() const { return {a_s, b_s, c_s, b, alpha, beta, e}; }
  static FrantarReformCoefficients from_values(std::span<const double> v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
  }
  friend bool operator==(const FrantarReformCoefficients&, const FrantarReformCoefficients&) = default;
};

/// Mixture-of-experts law, N = active parameters:
/// L = e + a/N^alpha + b/D^beta + c/(1-S)^lambda + d/((1-S)^delta N^gamma)
///
/// The table's `d` is stored as `d_coef` so it cannot be confused with the
/// token count; it is still serialized under the name "d".
struct AbnarCoefficients {
  static constexpr LawId kLaw = LawId::abnar;
  static constexpr std::array<std::string_view, 10> kNames = {"e",     "a",    "b",      "c",     "d",
                                                              "alpha", "beta", "lambda", "delta", "gamma"};

  double e = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d_coef = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double lambda = 0.0;
  double delta = 0.0;
  double gamma = 0.0;

  std::array<double, 10> values() const { return {e, a, b, c, d_coef, alpha, beta, lambda, delta, gamma}; }
  static AbnarCoefficients from_values(std::span<const double> v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9]};
  }
  friend bool operator==(const AbnarCoefficients&, const AbnarCoefficients&) = default;
};

/// Dense/sparse law, N = active parameters:
/// L = e (1-S)^gamma + (a (1-S)^alpha + c S)/N^alpha + b/D^beta
///
/// At S = 0 this is exactly the Hoffmann form with the same e, a, b, alpha, beta.
struct GeneralizedCoefficients {
  static constexpr LawId kLaw = LawId::generalized;
  static constexpr std::array<std::string_view, 7> kNames = {"e", "a", "b", "c", "alpha", "beta", "gamma"};

  double e = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  std::array<double, 7> values() const { return {e, a, b, c, alpha, beta, gamma}; }
  static GeneralizedCoefficients from_values(std::span<const double> v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
  }
  friend bool operator==(const GeneralizedCoefficients&, const GeneralizedCoefficients&) = default;
};

using CoefficientSet = std::variant<KaplanCoefficients, HoffmannCoefficients, FrantarCoefficients,
                                    FrantarReformCoefficients, AbnarCoefficients, GeneralizedCoefficients>;

LawId law_of(const CoefficientSet& coeffs);

/// Coefficient names of a law in table order.
std::span<const std::string_view> coefficient_names(LawId law);

/// Flattened values in coefficient_names() order.
std::vector<double> coefficient_values(const CoefficientSet& coeffs);

/// Inverse of coefficient_values(). Throws DomainError on a size mismatch.
CoefficientSet make_coefficients(LawId law, std::span<const double> values);

/// Published fitted values, embedded as the table literals.
CoefficientSet published_coefficients(LawId law);

/// Finite values; positive exponents (Abnar's lambda may be negative).
/// Throws DomainError naming the offending coefficient.
void validate(const CoefficientSet& coeffs);

/// {"law": "<id>", "coefficients": {name: value}}
nlohmann::json to_json(const CoefficientSet& coeffs);
/// Requires every coefficient of the law and no others. Throws ParseError.
CoefficientSet coefficients_from_json(const nlohmann::json& doc);

}  // namespace scalelaw
