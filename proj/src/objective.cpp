// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "fit_internal.hpp"
#include "scalelaw/error.hpp"
#include "scalelaw/laws.hpp"

namespace scalelaw {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_config(const FitObjectiveConfig& config) {
  if (config.metric == FitMetric::huber && !(config.huber_delta > 0.0)) {
    throw DomainError("huber delta must be > 0");
  }
}

// Runs fn(begin, end) over a static contiguous partition of [0, count); each
// index is handled by exactly one thread.
template <typename Fn>
void fan_out(std::size_t count, std::size_t workers, Fn fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(count, w * chunk);
    const std::size_t end = std::min(count, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

double objective(const CoefficientSet& coeffs, std::span<const ExperimentRecord> records,
                 const FitObjectiveConfig& config) {
  return detail::aggregate(detail::residuals(coeffs, records, config), config);
}

namespace detail {

double metric_value(double residual, const FitObjectiveConfig& config) {
  if (config.metric == FitMetric::huber) {
    const double r = std::abs(residual);
    const double delta = config.huber_delta;
    return r <= delta ? 0.5 * r * r : delta * (r - 0.5 * delta);
  }
  return residual * residual;
}

std::vector<double> residuals(const CoefficientSet& coeffs, std::span<const ExperimentRecord> records,
                              const FitObjectiveConfig& config) {
  require_records(records);
  check_config(config);
  const bool log_space = config.metric == FitMetric::log_mse || config.space == LossSpace::log_loss;
  std::vector<double> out(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ExperimentRecord& rec = records[i];
    double predicted = 0.0;
    try {
      predicted = evaluate(coeffs, rec.scale);
    } catch (const DomainError& e) {
      throw DomainError("record " + std::to_string(i) + ": " + e.what());
    }
    if (!std::isfinite(predicted)) return {};
    if (log_space) {
      if (!(predicted > 0.0)) return {};
      if (!(rec.loss > 0.0)) throw DomainError("record " + std::to_string(i) + ": loss must be > 0");
      out[i] = std::log(predicted) - std::log(rec.loss);
    } else {
      out[i] = predicted - rec.loss;
    }
  }
  return out;
}

double aggregate(std::span<const double> residuals, const FitObjectiveConfig& config) {
  if (residuals.empty()) return kInf;
  double total = 0.0;
  for (double r : residuals) total += metric_value(r, config);
  const double mean = total / static_cast<double>(residuals.size());
  return std::isfinite(mean) ? mean : kInf;
}

std::vector<std::vector<double>> evaluate_residuals(LawId law, const std::vector<std::vector<double>>& candidates,
                                                    std::span<const ExperimentRecord> records,
                                                    const FitObjectiveConfig& config, std::size_t workers) {
  std::vector<std::vector<double>> out(candidates.size());
  fan_out(candidates.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = residuals(make_coefficients(law, candidates[i]), records, config);
  });
  return out;
}

std::vector<double> evaluate_candidates(LawId law, const std::vector<std::vector<double>>& candidates,
                                        std::span<const ExperimentRecord> records,
                                        const FitObjectiveConfig& config, std::size_t workers) {
  std::vector<double> out(candidates.size());
  fan_out(candidates.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = objective(make_coefficients(law, candidates[i]), records, config);
  });
  return out;
}

void require_records(std::span<const ExperimentRecord> records) {
  if (records.empty()) throw DomainError("fitting needs at least one record");
}

std::size_t best_index(std::span<const TraceEntry> trace) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i].objective < trace[best].objective) best = i;
  }
  return best;
}

FitResult finish(LawId law, std::string method, std::vector<TraceEntry> trace, std::uint64_t seed) {
  const std::size_t best = best_index(trace);
  FitResult result;
  result.law = law;
  result.method = std::move(method);
  result.coefficients = make_coefficients(law, trace[best].candidate);
  result.objective = trace[best].objective;
  result.evaluations = trace.size();
  result.trace = std::move(trace);
  result.seed = seed;
  return result;
}

}  // namespace detail
}  // namespace scalelaw
