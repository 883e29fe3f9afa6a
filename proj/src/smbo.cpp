// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "fit_internal.hpp"
#include "gp_surrogate.hpp"
#include "scalelaw/error.hpp"
#include "scalelaw/random.hpp"

// Multi-start model-based search. A local run keeps a trust region around its
// center; its surrogate is a linear model of every per-record residual fitted
// to nearby history, which gives a Gauss-Newton model of the objective. When
// the region collapses the center is recorded as a local minimum and a
// Gaussian-process acquisition on the log objective chooses where the next
// run starts, away from the minima already found.

namespace scalelaw {
namespace {

constexpr std::size_t kMaxModelPoints = 60;
constexpr std::size_t kRestartCandidates = 1000;
constexpr double kExploration = 1.5;
constexpr double kObjectiveFloor = 1e-12;

constexpr double kRadiusInit = 0.1;
constexpr double kRadiusMin = 1e-3;  // a run stops here
constexpr double kRadiusMax = 0.5;
constexpr double kPolishRadiusMin = 1e-7;
constexpr double kPolishShare = 0.1;   // budget share kept for polishing
constexpr double kBasinRadius = 0.05;  // times sqrt(dims)
constexpr double kMergeRadius = 0.01;  // times sqrt(dims)
constexpr double kMergeValue = 1e-3;   // relative objective match to a known minimum
constexpr double kMergeValueRadius = 0.0125;
constexpr std::size_t kStallWindow = 4;  // times dims evaluations
constexpr double kStallGain = 0.01;      // relative gain a run must make per window

using Point = std::vector<double>;

double distance(const Point& a, const Point& b) {
  double sum = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) sum += (a[c] - b[c]) * (a[c] - b[c]);
  return std::sqrt(sum);
}

bool is_duplicate(const std::vector<Point>& units, const Point& point) {
  return std::any_of(units.begin(), units.end(), [&](const Point& u) {
    double dist = 0.0;
    for (std::size_t c = 0; c < point.size(); ++c) dist = std::max(dist, std::abs(u[c] - point[c]));
    return dist < 1e-13;
  });
}

std::vector<Point> latin_hypercube(std::size_t count, std::size_t dims, Rng& rng) {
  std::vector<Point> points(count, Point(dims));
  std::vector<std::size_t> strata(count);
  for (std::size_t d = 0; d < dims; ++d) {
    std::iota(strata.begin(), strata.end(), 0);
    for (std::size_t i = count; i > 1; --i) std::swap(strata[i - 1], strata[uniform_index(rng, i)]);
    for (std::size_t i = 0; i < count; ++i) {
      points[i][d] = (static_cast<double>(strata[i]) + unit_uniform(rng)) / static_cast<double>(count);
    }
  }
  return points;
}

Point random_unit(std::size_t dims, Rng& rng) {
  Point u(dims);
  for (double& v : u) v = unit_uniform(rng);
  return u;
}

// Search history: unit-cube points, their residual vectors and objectives.
struct History {
  std::vector<Point> units;
  std::vector<std::vector<double>> residuals;
  std::vector<double> objectives;
};

// Log objective for the surrogate; infeasible points sit one unit above the
// worst feasible one.
std::vector<double> surrogate_targets(const std::vector<double>& objectives, bool& degenerate) {
  double worst = -std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> y(objectives.size());
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    if (std::isfinite(objectives[i])) {
      y[i] = std::log(objectives[i] + kObjectiveFloor);
      worst = std::max(worst, y[i]);
      best = std::min(best, y[i]);
    }
  }
  if (!std::isfinite(worst)) {
    degenerate = true;
    return y;
  }
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    if (!std::isfinite(objectives[i])) y[i] = worst + 1.0;
  }
  degenerate = !(*std::max_element(y.begin(), y.end()) > best);
  return y;
}

enum class ModelOutcome { step, sparse, no_decrease };

// Fits the residual Jacobian by least squares on the nearest points within
// three radii and takes the Levenberg-Marquardt step that stays inside the
// trust ball. Huber metrics use iteratively reweighted residuals.
ModelOutcome gauss_newton_step(const History& h, std::size_t center, double radius,
                               const FitObjectiveConfig& config, Point& next, double& predicted_decrease) {
  const std::size_t dims = h.units[center].size();
  const auto d = static_cast<Eigen::Index>(dims);
  const std::vector<double>& r0 = h.residuals[center];
  const auto n = static_cast<Eigen::Index>(r0.size());

  std::vector<std::pair<double, std::size_t>> near;
  for (std::size_t i = 0; i < h.units.size(); ++i) {
    if (i == center || h.residuals[i].empty()) continue;
    const double dist = distance(h.units[i], h.units[center]);
    if (dist <= 3.0 * radius && dist > 0.0) near.emplace_back(dist, i);
  }
  if (near.size() < dims) return ModelOutcome::sparse;
  const std::size_t m = std::min(near.size(), 3 * dims);
  std::partial_sort(near.begin(), near.begin() + static_cast<std::ptrdiff_t>(m), near.end());

  Eigen::MatrixXd dx(static_cast<Eigen::Index>(m), d);
  Eigen::MatrixXd dr(static_cast<Eigen::Index>(m), n);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = near[k].second;
    const auto row = static_cast<Eigen::Index>(k);
    for (std::size_t c = 0; c < dims; ++c) {
      dx(row, static_cast<Eigen::Index>(c)) = (h.units[i][c] - h.units[center][c]) / radius;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      dr(row, j) = h.residuals[i][static_cast<std::size_t>(j)] - r0[static_cast<std::size_t>(j)];
    }
  }
  const Eigen::MatrixXd jt = dx.completeOrthogonalDecomposition().solve(dr);  // d x n
  if (!jt.allFinite()) return ModelOutcome::no_decrease;

  Eigen::VectorXd r(n);
  Eigen::VectorXd w(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    r(j) = r0[static_cast<std::size_t>(j)];
    const double a = std::abs(r(j));
    w(j) = config.metric == FitMetric::huber && a > config.huber_delta ? config.huber_delta / a : 1.0;
  }
  const Eigen::MatrixXd a = jt * w.asDiagonal() * jt.transpose();
  const Eigen::VectorXd g = jt * w.asDiagonal() * r;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
  const double floor = 1e-12 * (1.0 + a.trace());
  auto step_for = [&](double mu) -> Eigen::VectorXd { return -(a + (floor + mu) * eye).ldlt().solve(g); };
  Eigen::VectorXd step = step_for(0.0);
  if (!step.allFinite() || step.norm() > 1.0) {
    double lo = 0.0;
    double hi = g.norm() + a.norm();
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (step_for(mid).norm() > 1.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    step = step_for(hi);
  }
  if (!step.allFinite()) return ModelOutcome::no_decrease;

  next = h.units[center];
  for (std::size_t c = 0; c < dims; ++c) {
    const auto k = static_cast<Eigen::Index>(c);
    const double moved = std::clamp(next[c] + radius * step(k), 0.0, 1.0);
    step(k) = (moved - next[c]) / radius;
    next[c] = moved;
  }
  const Eigen::VectorXd model = r + jt.transpose() * step;
  std::vector<double> predicted(model.data(), model.data() + n);
  predicted_decrease = h.objectives[center] - detail::aggregate(predicted, config);
  if (!(predicted_decrease > 0.0) || is_duplicate(h.units, next)) return ModelOutcome::no_decrease;
  return ModelOutcome::step;
}

// A point on the trust sphere in a random direction, clamped to the cube.
Point geometry_step(const Point& center, double radius, Rng& rng) {
  Point dir(center.size());
  double norm = 0.0;
  for (double& v : dir) {
    v = standard_normal(rng);
    norm += v * v;
  }
  norm = std::sqrt(norm);
  Point next(center);
  for (std::size_t c = 0; c < next.size(); ++c) next[c] = std::clamp(center[c] + radius * dir[c] / norm, 0.0, 1.0);
  return next;
}

bool near_any(const std::vector<Point>& minima, const Point& p, double radius) {
  return std::any_of(minima.begin(), minima.end(), [&](const Point& m) { return distance(m, p) < radius; });
}

// Lower-confidence-bound pick over uniform candidates outside the basins of
// the minima found so far. Falls back to a uniform point when the history
// cannot support a surrogate.
Point restart_point(const History& h, const std::vector<Point>& minima, double exclusion, Rng& rng) {
  const std::size_t dims = h.units.front().size();
  bool degenerate = false;
  const std::vector<double> y = surrogate_targets(h.objectives, degenerate);
  detail::GpSurrogate gp;
  if (!degenerate) {
    std::vector<std::size_t> order(y.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });
    const std::size_t m = std::min(order.size(), kMaxModelPoints);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(dims));
    Eigen::VectorXd targets(static_cast<Eigen::Index>(m));
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < dims; ++c) {
        x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = h.units[order[r]][c];
      }
      targets(static_cast<Eigen::Index>(r)) = y[order[r]];
    }
    const Eigen::VectorXd center = x.row(0).transpose();
    degenerate = !gp.fit(x, targets, center, detail::GpSurrogate::Trend::linear);
  }
  if (degenerate) return random_unit(dims, rng);

  Point best;
  double best_score = std::numeric_limits<double>::infinity();
  Eigen::VectorXd point(static_cast<Eigen::Index>(dims));
  for (std::size_t k = 0; k < kRestartCandidates; ++k) {
    Point candidate = random_unit(dims, rng);
    if (near_any(minima, candidate, exclusion)) continue;
    for (std::size_t c = 0; c < dims; ++c) point(static_cast<Eigen::Index>(c)) = candidate[c];
    const auto pred = gp.predict(point);
    const double score = pred.mean - kExploration * pred.stddev;
    if (score < best_score) {
      best_score = score;
      best = std::move(candidate);
    }
  }
  if (best.empty() || is_duplicate(h.units, best)) return random_unit(dims, rng);
  return best;
}

// Best evaluated point that neither started a run nor lies in a known basin.
// Basin hop: the best minimum with one or two coordinates redrawn, which
// lets a run escape a plateau where some term has been switched off.
Point hop_point(const std::vector<Point>& minima, const std::vector<double>& values, Rng& rng) {
  const auto best = std::min_element(values.begin(), values.end()) - values.begin();
  Point p = minima[static_cast<std::size_t>(best)];
  const std::size_t redraw = 1 + uniform_index(rng, 2);
  for (std::size_t k = 0; k < redraw; ++k) p[uniform_index(rng, p.size())] = unit_uniform(rng);
  return p;
}

std::optional<std::size_t> unexplored_best(const History& h, const std::vector<Point>& minima,
                                           const std::vector<bool>& used, double exclusion) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < h.units.size(); ++i) {
    if (used[i] || !std::isfinite(h.objectives[i])) continue;
    if (best && !(h.objectives[i] < h.objectives[*best])) continue;
    if (!near_any(minima, h.units[i], exclusion)) best = i;
  }
  return best;
}

struct LocalRun {
  std::size_t center = 0;
  double radius = kRadiusInit;
  bool active = false;
  bool polish = false;
  std::size_t checkpoint = 0;  // evaluation count at the last progress check
  double checkpoint_value = 0.0;
};

}  // namespace

FitResult smbo_fit(const SearchSpace& space, std::span<const ExperimentRecord> records,
                   const FitObjectiveConfig& config, std::size_t budget, std::size_t init_samples,
                   std::uint64_t seed, const ParallelOptions& parallel) {
  detail::require_records(records);
  if (init_samples < 2) throw DomainError("smbo needs at least 2 initial samples");
  if (budget <= init_samples) throw DomainError("smbo budget must exceed init_samples");

  const std::size_t dims = space.dims();
  const LawId law = space.law();
  const double root_dims = std::sqrt(static_cast<double>(dims));
  Rng rng(seed);

  History h;
  h.units = latin_hypercube(init_samples, dims, rng);
  std::vector<Point> initial;
  for (const auto& u : h.units) initial.push_back(space.from_unit(u));
  h.residuals = detail::evaluate_residuals(law, initial, records, config, parallel.workers);

  std::vector<TraceEntry> trace;
  trace.reserve(budget);
  for (std::size_t i = 0; i < init_samples; ++i) {
    h.objectives.push_back(detail::aggregate(h.residuals[i], config));
    trace.push_back({i, std::move(initial[i]), h.objectives[i]});
  }

  std::vector<Point> minima;
  std::vector<double> minima_values;
  std::vector<bool> used(init_samples, false);
  const auto polish_from = static_cast<std::size_t>(static_cast<double>(budget) * (1.0 - kPolishShare));
  bool polished = false;
  std::size_t restarts = 0;
  LocalRun run{detail::best_index(trace), kRadiusInit, true, false, trace.size(), 0.0};
  run.checkpoint_value = h.objectives[run.center];
  used[run.center] = true;

  while (trace.size() < budget) {
    if (!polished && trace.size() >= polish_from) {
      // Spend the tail of the budget tightening the best point found.
      polished = true;
      run = LocalRun{detail::best_index(trace), 4.0 * kRadiusMin, true, true, 0, 0.0};
    }
    if (run.active && !std::isfinite(h.objectives[run.center])) run.active = false;
    // Restarts cycle through the best unexplored history point, the surrogate
    // acquisition, a uniform draw and a hop from the best minimum.
    const std::size_t restart_kind = run.active ? 0 : restarts++ % 4;
    if (!run.active && restart_kind == 0) {
      if (auto start = unexplored_best(h, minima, used, kBasinRadius * root_dims)) {
        used[*start] = true;
        run = LocalRun{*start, kRadiusInit, true, false, trace.size(), h.objectives[*start]};
      }
    }

    enum class Kind { restart, model, geometry } kind = Kind::restart;
    Point next;
    double predicted = 0.0;
    if (run.active) {
      switch (gauss_newton_step(h, run.center, run.radius, config, next, predicted)) {
        case ModelOutcome::step:
          kind = Kind::model;
          break;
        case ModelOutcome::no_decrease:
          run.radius *= 0.5;
          [[fallthrough]];
        case ModelOutcome::sparse:
          kind = Kind::geometry;
          next = geometry_step(h.units[run.center], run.radius, rng);
          break;
      }
    } else {
      if (restart_kind == 1) {
        next = restart_point(h, minima, kBasinRadius * root_dims, rng);
      } else if (restart_kind == 3 && !minima.empty()) {
        next = hop_point(minima, minima_values, rng);
      } else {
        next = random_unit(dims, rng);
      }
    }

    std::vector<Point> batch{space.from_unit(next)};
    std::vector<double> res = detail::evaluate_residuals(law, batch, records, config, 1).front();
    const double score = detail::aggregate(res, config);
    const std::size_t index = trace.size();
    h.units.push_back(std::move(next));
    h.residuals.push_back(std::move(res));
    h.objectives.push_back(score);
    used.push_back(kind == Kind::restart);
    trace.push_back({index, std::move(batch.front()), score});

    if (kind == Kind::restart) {
      run = LocalRun{index, kRadiusInit, true, false, trace.size(), score};
      continue;
    }
    const double reference = h.objectives[run.center];
    if (kind == Kind::model) {
      const double ratio = std::isfinite(score) ? (reference - score) / predicted : -1.0;
      if (ratio > 0.75) {
        run.radius = std::min(2.0 * run.radius, kRadiusMax);
      } else if (ratio < 0.25) {
        run.radius *= 0.5;
      }
    }
    if (score < reference) run.center = index;
    // Runs creeping along a plateau give way to fresh starts.
    bool stalled = false;
    if (!run.polish && trace.size() - run.checkpoint >= kStallWindow * dims) {
      stalled = h.objectives[run.center] > (1.0 - kStallGain) * run.checkpoint_value;
      run.checkpoint = trace.size();
      run.checkpoint_value = h.objectives[run.center];
    }
    if (stalled || run.radius < (run.polish ? kPolishRadiusMin : kRadiusMin)) {
      minima.push_back(h.units[run.center]);
      minima_values.push_back(h.objectives[run.center]);
      run.active = false;
    } else if (!run.polish && (near_any(minima, h.units[run.center], kMergeRadius * root_dims) ||
                               (run.radius < kMergeValueRadius &&
                                std::any_of(minima_values.begin(), minima_values.end(), [&](double v) {
                                  return std::abs(h.objectives[run.center] - v) <= kMergeValue * v;
                                })))) {
      run.active = false;  // drifted into a basin that was already explored
    }
  }
  return detail::finish(law, "smbo", std::move(trace), seed);
}

}  // namespace scalelaw
