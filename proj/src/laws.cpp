// SPDX-License-Identifier: Apache-2.0
#include "scalelaw/laws.hpp"

#include <cmath>
#include <string>

#include "scalelaw/error.hpp"

namespace scalelaw {

void check_count(double value, const char* name) {
  if (std::isnan(value) || value < 1.0) {
    throw DomainError(std::string(name) + " must be >= 1");
  }
}

void check_sparsity(double s) {
  if (!(s >= 0.0 && s <= kMaxSparsity)) throw DomainError("sparsity out of [0,1)");
}

void check_budget(ComputeBudget c) {
  if (!(c.flops > 0.0) || !std::isfinite(c.flops)) throw DomainError("compute budget must be finite and > 0");
}

void check_scale(const ModelScale& scale) {
  check_count(scale.n_active, "n_active");
  check_count(scale.d_tokens, "d_tokens");
  check_sparsity(scale.sparsity);
}

double eval_kaplan(const KaplanCoefficients& k, double n, double d) {
  check_count(n, "n_active");
  check_count(d, "d_tokens");
  const double param_term = std::pow(k.n_c / n, k.alpha_n / k.alpha_d);
  return std::pow(param_term + k.d_c / d, k.alpha_d);
}

double eval_hoffmann(const HoffmannCoefficients& h, double n, double d) {
  check_count(n, "n_active");
  check_count(d, "d_tokens");
  return h.e + h.a / std::pow(n, h.alpha) + h.b / std::pow(d, h.beta);
}

double eval_frantar(const FrantarCoefficients& f, double n, double d, double s) {
  check_count(n, "n_active");
  check_count(d, "d_tokens");
  check_sparsity(s);
  const double sparse_scale = f.a_s * std::pow(1.0 - s, f.b_s) + f.c_s;
  return sparse_scale * std::pow(1.0 / n, f.b_n) + std::pow(f.a_d / d, f.b_d) + f.c;
}

double eval_frantar_reform(const FrantarReformCoefficients& f, double n, double d, double s) {
  check_count(n, "n_active");
  check_count(d, "d_tokens");
  check_sparsity(s);
  const double sparse_scale = f.a_s * std::pow(1.0 - s, f.b_s) + f.c_s;
  return f.e + sparse_scale / std::pow(n, f.alpha) + f.b / std::pow(d, f.beta);
}

double eval_abnar(const AbnarCoefficients& m, double n, double d, double s) {
  check_count(n, "n_active");
  check_count(d, "d_tokens");
  check_sparsity(s);
  const double dense = 1.0 - s;
  return m.e + m.a / std::pow(n, m.alpha) + m.b / std::pow(d, m.beta) + m.c / std::pow(dense, m.lambda) +
         m.d_coef / (std::pow(dense, m.delta) * std::pow(n, m.gamma));
}

double eval_generalized(const GeneralizedCoefficients& g, double n, double d, double s) {
  check_count(n, "n_active");
  check_count(d, "d_tokens");
  check_sparsity(s);
  const double dense = 1.0 - s;
  // Same operation order as eval_hoffmann so s = 0 is bit-identical.
  const double entropy = g.e * std::pow(dense, g.gamma);
  const double param_scale = g.a * std::pow(dense, g.alpha) + g.c * s;
  return entropy + param_scale / std::pow(n, g.alpha) + g.b / std::pow(d, g.beta);
}

double evaluate(const CoefficientSet& coeffs, const ModelScale& scale) {
  return std::visit(
      [&](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        const double n = scale.n_active;
        const double d = scale.d_tokens;
        const double s = scale.sparsity;
        if constexpr (std::is_same_v<T, KaplanCoefficients>) {
          check_sparsity(s);
          return eval_kaplan(c, n, d);
        } else if constexpr (std::is_same_v<T, HoffmannCoefficients>) {
          check_sparsity(s);
          return eval_hoffmann(c, n, d);
        } else if constexpr (std::is_same_v<T, FrantarCoefficients>) {
          return eval_frantar(c, n, d, s);
        } else if constexpr (std::is_same_v<T, FrantarReformCoefficients>) {
          return eval_frantar_reform(c, n, d, s);
        } else if constexpr (std::is_same_v<T, AbnarCoefficients>) {
          return eval_abnar(c, n, d, s);
        } else {
          return eval_generalized(c, n, d, s);
        }
      },
      coeffs);
}

FrantarReformCoefficients reformat_frantar(const FrantarCoefficients& f) {
  return FrantarReformCoefficients{.a_s = f.a_s,
                                   .b_s = f.b_s,
                                   .c_s = f.c_s,
                                   .b = std::pow(f.a_d, f.b_d),
                                   .alpha = f.b_n,
                                   .beta = f.b_d,
                                   .e = f.c};
}

double sparsity_from_counts(double total, double active) {
  if (std::isnan(active) || active < 1.0) throw DomainError("active parameters must be >= 1");
  if (std::isnan(total) || active > total) throw DomainError("active parameters exceed total parameters");
  return (total - active) / total;
}

double sparsity_from_experts(double total_experts, double active_experts) {
  if (std::isnan(active_experts) || active_experts < 1.0) throw DomainError("active experts must be >= 1");
  if (std::isnan(total_experts) || active_experts > total_experts) {
    throw DomainError("active experts exceed total experts");
  }
  return (total_experts - active_experts) / total_experts;
}

ComputeBudget compute_flops(double n, double d) { return ComputeBudget{6.0 * n * d}; }

}  // namespace scalelaw
