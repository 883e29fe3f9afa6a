// SPDX-License-Identifier: Apache-2.0
#include "scalelaw/plan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "scalelaw/error.hpp"
#include "scalelaw/laws.hpp"

namespace scalelaw {
namespace {

constexpr std::size_t kScanPoints = 2048;

// Argmin of a/N^alpha + b/D^beta on 6 N D = C.
double closed_form_n(double a, double b, double alpha, double beta, ComputeBudget c) {
  const double ratio = (a * alpha) / (b * beta);
  return std::pow(ratio, 1.0 / (alpha + beta)) * std::pow(c.flops / 6.0, beta / (alpha + beta));
}

AllocationPlan make_plan(const CoefficientSet& coeffs, ComputeBudget c, double s, double n, PlanMethod method) {
  AllocationPlan plan;
  plan.budget = c;
  plan.sparsity = s;
  plan.n_opt = n;
  plan.d_opt = std::max(1.0, c.flops / (6.0 * n));
  plan.predicted_loss = evaluate(coeffs, ModelScale{plan.n_opt, plan.d_opt, s});
  plan.method = method;
  return plan;
}

}  // namespace

AllocationPlan optimal_allocation_dense(const HoffmannCoefficients& coeffs, ComputeBudget c) {
  check_budget(c);
  const double n = closed_form_n(coeffs.a, coeffs.b, coeffs.alpha, coeffs.beta, c);
  return make_plan(coeffs, c, 0.0, n, PlanMethod::closed_form);
}

AllocationPlan optimal_allocation_sparse(const GeneralizedCoefficients& coeffs, ComputeBudget c, double s) {
  check_budget(c);
  check_sparsity(s);
  const double a_eff = coeffs.a * std::pow(1.0 - s, coeffs.alpha) + coeffs.c * s;
  const double n = closed_form_n(a_eff, coeffs.b, coeffs.alpha, coeffs.beta, c);
  return make_plan(coeffs, c, s, n, PlanMethod::closed_form);
}

AllocationPlan optimal_allocation_numeric(const CoefficientSet& coeffs, ComputeBudget c, double s) {
  check_budget(c);
  check_sparsity(s);
  const double k = c.flops / 6.0;
  if (!(k >= 1.0)) throw DomainError("compute budget below 6 FLOPs leaves no valid (N, D)");
  const double hi = std::log(k);
  auto loss_at = [&](double log_n) {
    // exp(log k) may land an ulp above k.
    const double n = std::clamp(std::exp(log_n), 1.0, k);
    return evaluate(coeffs, ModelScale{n, k / n, s});
  };
  if (hi == 0.0) return make_plan(coeffs, c, s, 1.0, PlanMethod::numeric);

  // Coarse scan locates the basin, Brent polishes inside the neighbouring cells.
  std::size_t best = 0;
  double best_loss = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kScanPoints; ++i) {
    const double x = hi * static_cast<double>(i) / static_cast<double>(kScanPoints - 1);
    const double f = loss_at(x);
    if (f < best_loss) {
      best_loss = f;
      best = i;
    }
  }
  const double step = hi / static_cast<double>(kScanPoints - 1);
  const double lo_x = std::max(0.0, static_cast<double>(best) * step - step);
  const double hi_x = std::min(hi, static_cast<double>(best) * step + step);
  std::uintmax_t iters = 200;
  const auto [x, f] = boost::math::tools::brent_find_minima(loss_at, lo_x, hi_x, 40, iters);
  const double n = f < best_loss ? std::exp(x) : std::exp(static_cast<double>(best) * step);
  return make_plan(coeffs, c, s, std::clamp(n, 1.0, k), PlanMethod::numeric);
}

AllocationPlan optimal_allocation(const CoefficientSet& coeffs, ComputeBudget c, double s) {
  if (const auto* h = std::get_if<HoffmannCoefficients>(&coeffs)) {
    check_sparsity(s);
    if (s != 0.0) throw DomainError("the hoffmann law is dense; use sparsity 0");
    return optimal_allocation_dense(*h, c);
  }
  if (const auto* g = std::get_if<GeneralizedCoefficients>(&coeffs)) return optimal_allocation_sparse(*g, c, s);
  return optimal_allocation_numeric(coeffs, c, s);
}

std::pair<double, AllocationPlan> optimal_sparsity(const GeneralizedCoefficients& coeffs, ComputeBudget c,
                                                   std::span<const double> s_grid) {
  if (s_grid.empty()) throw DomainError("sparsity grid is empty");
  std::optional<AllocationPlan> best;
  for (double s : s_grid) {
    AllocationPlan plan = optimal_allocation_sparse(coeffs, c, s);
    if (!best || plan.predicted_loss < best->predicted_loss ||
        (plan.predicted_loss == best->predicted_loss && s < best->sparsity)) {
      best = plan;
    }
  }
  return {best->sparsity, *best};
}

ScalingGuidance kaplan_guidance(double compute_multiplier) {
  if (!(compute_multiplier > 0.0) || !std::isfinite(compute_multiplier)) {
    throw DomainError("compute multiplier must be finite and > 0");
  }
  const double p = std::log(5.5) / std::log(10.0);
  const double q = std::log(1.8) / std::log(10.0);
  return {std::pow(compute_multiplier, p), std::pow(compute_multiplier, q)};
}

std::string_view plan_method_name(PlanMethod method) {
  return method == PlanMethod::closed_form ? "closed_form" : "numeric";
}

nlohmann::json to_json(const AllocationPlan& plan) {
  return nlohmann::json{{"budget", plan.budget.flops},         {"sparsity", plan.sparsity},
                        {"n_opt", plan.n_opt},                 {"d_opt", plan.d_opt},
                        {"predicted_loss", plan.predicted_loss}, {"method", std::string(plan_method_name(plan.method))}};
}

AllocationPlan allocation_plan_from_json(const nlohmann::json& doc) {
  try {
    AllocationPlan plan;
    plan.budget = ComputeBudget{doc.at("budget").get<double>()};
    plan.sparsity = doc.at("sparsity").get<double>();
    plan.n_opt = doc.at("n_opt").get<double>();
    plan.d_opt = doc.at("d_opt").get<double>();
    plan.predicted_loss = doc.at("predicted_loss").get<double>();
    const auto method = doc.at("method").get<std::string>();
    if (method == "closed_form") {
      plan.method = PlanMethod::closed_form;
    } else if (method == "numeric") {
      plan.method = PlanMethod::numeric;
    } else {
      throw ParseError("unknown plan method '" + method + "'");
    }
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("allocation plan: ") + e.what());
  }
}

}  // namespace scalelaw
