// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "scalelaw/coefficients.hpp"
#include "scalelaw/error.hpp"
#include "scalelaw/fit.hpp"
#include "scalelaw/grids.hpp"
#include "scalelaw/isoflop.hpp"
#include "scalelaw/laws.hpp"
#include "scalelaw/plan.hpp"
#include "scalelaw/records.hpp"
#include "scalelaw/synth.hpp"

namespace scalelaw::cli {
namespace {

using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// Writes to the -o path when given, otherwise to `out`.
void emit(const std::optional<std::string>& path, std::ostream& out, const std::string& text) {
  if (!path) {
    out << text;
    return;
  }
  std::ofstream file(*path, std::ios::binary);
  if (!(file << text)) throw ParseError("cannot write '" + *path + "'");
}

std::string dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }
std::string dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

std::string six_digits(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  const char* env = std::getenv("SCALELAW_SEED");
  if (env == nullptr || *env == '\0') return 0;
  const std::string_view text(env);
  std::uint64_t seed = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("SCALELAW_SEED is not an unsigned integer: '" + std::string(text) + "'");
  }
  return seed;
}

// Coefficients come from the published tables or from a JSON file holding
// {"law", "coefficients"} (a fit result works too).
struct Source {
  std::optional<std::string> law;
  std::optional<std::string> file;
};

void add_source(CLI::App* cmd, Source& src, const std::string& suffix = "") {
  auto* law = cmd->add_option("--law" + suffix, src.law, "law id");
  auto* file = cmd->add_option("--coeffs" + suffix, src.file, "coefficient JSON file");
  (void)law;
  if (suffix.empty()) {
    cmd->add_flag("--published", "use the published coefficients (default)")->excludes(file);
  }
}

CoefficientSet load(const Source& src, const std::string& suffix = "") {
  if (!src.file) {
    if (!src.law) throw ParseError("--law" + suffix + " is required");
    return published_coefficients(parse_law(*src.law));
  }
  const nlohmann::json doc = read_json(*src.file);
  if (!doc.is_object() || !doc.contains("law") || !doc.contains("coefficients")) {
    throw ParseError(*src.file + ": expected an object with 'law' and 'coefficients'");
  }
  CoefficientSet coeffs = coefficients_from_json({{"law", doc["law"]}, {"coefficients", doc["coefficients"]}});
  if (src.law && parse_law(*src.law) != law_of(coeffs)) {
    throw ParseError(*src.file + " holds " + std::string(law_name(law_of(coeffs))) + " coefficients, not " +
                     *src.law);
  }
  validate(coeffs);
  return coeffs;
}

std::optional<double> count_flag(const std::optional<std::string>& text, const char* name) {
  if (!text) return std::nullopt;
  const double v = parse_count(*text);
  check_count(v, name);
  return v;
}

double required(const std::optional<double>& v, const std::string& flag) {
  if (!v) throw ParseError(flag + " is required");
  return *v;
}

std::vector<ModelScale> load_grid(const std::string& name_or_path) {
  for (GridSource source : {GridSource::hoffmann9, GridSource::frantar48, GridSource::abnar35}) {
    if (grid_name(source) == name_or_path) return reference_grid(source).scales;
  }
  return parse_scales(read_file(name_or_path));
}

// Search followed by local refinement, reported as one result whose trace
// holds every evaluation.
FitResult chain(FitResult search, const FitResult& refined) {
  for (std::size_t i = 1; i < refined.trace.size(); ++i) {  // entry 0 is the search incumbent
    TraceEntry entry = refined.trace[i];
    entry.index = search.trace.size();
    search.trace.push_back(std::move(entry));
  }
  search.method += "+local_refine";
  search.evaluations = search.trace.size();
  if (refined.objective < search.objective) {
    search.coefficients = refined.coefficients;
    search.objective = refined.objective;
  }
  return search;
}

ordered_json tables_json() {
  constexpr std::array<const char*, 6> kNumerals = {"I", "II", "III", "IV", "V", "VI"};
  ordered_json doc = ordered_json::array();
  for (std::size_t i = 0; i < kAllLaws.size(); ++i) {
    const LawId law = kAllLaws[i];
    const auto names = coefficient_names(law);
    const auto values = coefficient_values(published_coefficients(law));
    ordered_json coeffs = ordered_json::object();
    for (std::size_t k = 0; k < names.size(); ++k) coeffs[std::string(names[k])] = values[k];
    doc.push_back({{"table", kNumerals[i]}, {"law", std::string(law_name(law))}, {"coefficients", coeffs}});
  }
  return doc;
}

ordered_json curves_json(std::span<const IsoflopCurve> curves, double threshold) {
  ordered_json doc = ordered_json::array();
  for (const auto& curve : curves) {
    const IsoflopSample best = curve_minimum(curve);
    const SpikeReport spike = detect_spike(curve, threshold);
    ordered_json samples = ordered_json::array();
    for (const auto& p : curve.samples) samples.push_back({{"n", p.n}, {"d", p.d}, {"loss", p.loss}});
    doc.push_back({{"law", std::string(law_name(curve.law))},
                   {"budget", curve.budget.flops},
                   {"sparsity", curve.sparsity},
                   {"minimum", {{"n", best.n}, {"d", best.d}, {"loss", best.loss}}},
                   {"spike", {{"spiky", spike.spiky}, {"rise", spike.rise}, {"interior_minimum", spike.interior_minimum}}},
                   {"samples", samples}});
  }
  return doc;
}

ordered_json divergence_json(const DivergenceReport& report) {
  ordered_json points = ordered_json::array();
  for (const auto& p : report.points) {
    points.push_back({{"n", p.scale.n_active},
                      {"d", p.scale.d_tokens},
                      {"sparsity", p.scale.sparsity},
                      {"loss_a", p.loss_a},
                      {"loss_b", p.loss_b},
                      {"diff", p.diff}});
  }
  return {{"law_a", std::string(law_name(report.law_a))},
          {"law_b", std::string(law_name(report.law_b))},
          {"max_abs_diff", report.max_abs_diff},
          {"argmax", report.argmax},
          {"points", points}};
}

std::string divergence_text(const DivergenceReport& report) {
  std::ostringstream text;
  text.precision(17);
  text << law_name(report.law_a) << " vs " << law_name(report.law_b) << " over " << report.points.size()
       << " points\nmax_abs_diff " << report.max_abs_diff << '\n';
  if (!report.points.empty()) {
    const auto& p = report.points[report.argmax];
    text << "at n=" << six_digits(p.scale.n_active) << " d=" << six_digits(p.scale.d_tokens)
         << " s=" << six_digits(p.scale.sparsity) << " (" << p.loss_a << " vs " << p.loss_b << ")\n";
  }
  return text.str();
}

}  // namespace

double parse_count(const std::string& text) {
  std::string_view body = text;
  double scale = 1.0;
  if (!body.empty()) {
    switch (body.back()) {
      case 'M':
      case 'm':
        scale = 1e6;
        break;
      case 'B':
      case 'b':
        scale = 1e9;
        break;
      case 'T':
      case 't':
        scale = 1e12;
        break;
      default:
        break;
    }
    if (scale != 1.0) body.remove_suffix(1);
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
  if (body.empty() || ec != std::errc() || ptr != body.data() + body.size()) {
    throw ParseError("not a number: '" + text + "'");
  }
  return value * scale;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scaling-law evaluation, fitting and compute planning", "scalelaw"};
  app.require_subcommand(1);
  std::optional<std::string> output;
  std::optional<std::uint64_t> seed_flag;
  std::size_t workers = 1;

  auto* tables = app.add_subcommand("tables", "Print the published coefficient tables as JSON");
  tables->add_option("-o,--output", output, "output file");

  auto* eval = app.add_subcommand("eval", "Evaluate a law at one (n, d, s)");
  Source eval_src;
  std::optional<std::string> eval_n, eval_d;
  double eval_s = 0.0;
  add_source(eval, eval_src);
  eval->add_option("-n,--params", eval_n, "active parameters (accepts M/B/T)");
  eval->add_option("-d,--tokens", eval_d, "training tokens (accepts M/B/T)");
  eval->add_option("-s,--sparsity", eval_s, "sparsity in [0,1)");

  auto* fit = app.add_subcommand("fit", "Fit coefficients to experiment records");
  std::optional<std::string> fit_law, fit_records, fit_space, trace_path;
  std::string method = "smbo", metric = "mse", loss_space = "log_loss";
  std::size_t budget = 500, init = 20, points = 5, refine = 0;
  double tolerance = 1e-10, huber_delta = 1.0;
  fit->add_option("--law", fit_law, "law id");
  fit->add_option("--records", fit_records, "records CSV");
  fit->add_option("--space", fit_space, "search-space JSON (default: published value /10 .. x10)");
  fit->add_option("--method", method, "grid, random or smbo")->check(CLI::IsMember({"grid", "random", "smbo"}));
  fit->add_option("--budget", budget, "evaluations for random and smbo");
  fit->add_option("--init", init, "initial design size for smbo");
  fit->add_option("--points", points, "grid points per coefficient");
  fit->add_option("--refine", refine, "local refinement iterations after the search (0 = none)");
  fit->add_option("--tolerance", tolerance, "local refinement tolerance");
  fit->add_option("--metric", metric, "mse, huber or log_mse")->check(CLI::IsMember({"mse", "huber", "log_mse"}));
  fit->add_option("--huber-delta", huber_delta, "huber threshold");
  fit->add_option("--space-of-loss", loss_space, "residual space: loss or log_loss")
      ->check(CLI::IsMember({"loss", "log_loss"}));
  fit->add_option("--trace-csv", trace_path, "write the evaluation trace as CSV");

  auto* plan = app.add_subcommand("plan", "Compute-optimal allocation for a budget");
  Source plan_src;
  std::optional<std::string> plan_c;
  double plan_s = 0.0;
  std::vector<double> plan_grid;
  add_source(plan, plan_src);
  plan->add_option("-C,--compute", plan_c, "training FLOPs");
  auto* plan_s_opt = plan->add_option("-s,--sparsity", plan_s, "sparsity in [0,1)");
  plan->add_option("--sparsity-grid", plan_grid, "comma-separated sparsities; picks the best")
      ->delimiter(',')
      ->excludes(plan_s_opt);

  auto* iso = app.add_subcommand("isoflop", "Loss along constant-compute lines");
  Source iso_src;
  std::optional<std::string> iso_c, n_min, n_max;
  std::vector<double> iso_s;
  std::string iso_format = "csv";
  std::size_t samples = kDefaultCurveSamples;
  double threshold = kDefaultSpikeThreshold;
  add_source(iso, iso_src);
  iso->add_option("-C,--compute", iso_c, "training FLOPs");
  iso->add_option("-s,--sparsity", iso_s, "sparsity; repeat for several curves");
  iso->add_option("--format", iso_format, "csv, svg or json")->check(CLI::IsMember({"csv", "svg", "json"}));
  iso->add_option("--n-min", n_min, "smallest n");
  iso->add_option("--n-max", n_max, "largest n");
  iso->add_option("--samples", samples, "points per curve");
  iso->add_option("--spike-threshold", threshold, "relative rise flagged as a spike");

  auto* compare = app.add_subcommand("compare", "Loss differences between two laws on a grid");
  Source src_a, src_b;
  std::optional<std::string> cmp_grid;
  std::optional<double> cmp_s;
  std::string cmp_format = "text";
  add_source(compare, src_a, "-a");
  add_source(compare, src_b, "-b");
  compare->add_option("--grid", cmp_grid, "hoffmann9, frantar48, abnar35 or a CSV file");
  compare->add_option("-s,--sparsity", cmp_s, "evaluate every grid point at this sparsity");
  compare->add_option("--format", cmp_format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));

  auto* synth = app.add_subcommand("synth", "Synthetic records from a law on a grid");
  Source synth_src;
  std::optional<std::string> synth_grid;
  double noise = 0.0;
  add_source(synth, synth_src);
  synth->add_option("--grid", synth_grid, "hoffmann9, frantar48, abnar35 or a CSV file");
  synth->add_option("--noise", noise, "relative noise level");

  for (auto* cmd : {eval, fit, plan, iso, compare, synth}) {
    if (cmd != eval) cmd->add_option("-o,--output", output, "output file");
  }
  for (auto* cmd : {fit, synth}) cmd->add_option("--seed", seed_flag, "random seed (default: $SCALELAW_SEED or 0)");
  fit->add_option("--workers", workers, "evaluation threads")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (tables->parsed()) {
      emit(output, out, dump(tables_json()));
    } else if (eval->parsed()) {
      // Domain checks come first so a bad value is reported even when other
      // flags are missing.
      check_sparsity(eval_s);
      const auto n = count_flag(eval_n, "n_active");
      const auto d = count_flag(eval_d, "d_tokens");
      const CoefficientSet coeffs = load(eval_src);
      const double loss = evaluate(coeffs, ModelScale{required(n, "-n"), required(d, "-d"), eval_s});
      out << six_digits(loss) << '\n';
    } else if (fit->parsed()) {
      if (!fit_law) throw ParseError("--law is required");
      if (!fit_records) throw ParseError("--records is required");
      const LawId law = parse_law(*fit_law);
      const auto records = parse_records(read_file(*fit_records));
      const SearchSpace space = fit_space ? SearchSpace::from_json(law, read_json(*fit_space)) : SearchSpace::defaults(law);
      FitObjectiveConfig config;
      config.metric = parse_metric(metric);
      config.huber_delta = huber_delta;
      config.space = loss_space == "loss" ? LossSpace::loss : LossSpace::log_loss;
      const ParallelOptions parallel{workers};
      const std::uint64_t seed = resolve_seed(seed_flag);
      FitResult result;
      if (method == "grid") {
        result = grid_search(space, records, config, points, parallel);
      } else if (method == "random") {
        result = random_search(space, records, config, budget, seed, parallel);
      } else {
        result = smbo_fit(space, records, config, budget, init, seed, parallel);
      }
      if (refine > 0) result = chain(result, local_refine(result.coefficients, records, config, refine, tolerance));
      if (trace_path) emit(trace_path, out, trace_csv(result));
      emit(output, out, dump(to_json(result)));
    } else if (plan->parsed()) {
      const auto c = plan_c ? std::optional<double>(parse_count(*plan_c)) : std::nullopt;
      if (c) check_budget(ComputeBudget{*c});
      for (double s : plan_grid) check_sparsity(s);
      check_sparsity(plan_s);
      const CoefficientSet coeffs = load(plan_src);
      const ComputeBudget budget_c{required(c, "-C")};
      if (plan_grid.empty()) {
        emit(output, out, dump(to_json(optimal_allocation(coeffs, budget_c, plan_s))));
      } else {
        std::optional<AllocationPlan> best;
        if (const auto* g = std::get_if<GeneralizedCoefficients>(&coeffs)) {
          best = optimal_sparsity(*g, budget_c, plan_grid).second;
        } else {
          for (double s : plan_grid) {
            AllocationPlan p = optimal_allocation(coeffs, budget_c, s);
            if (!best || p.predicted_loss < best->predicted_loss ||
                (p.predicted_loss == best->predicted_loss && s < best->sparsity)) {
              best = p;
            }
          }
        }
        emit(output, out, dump(nlohmann::json{{"s_best", best->sparsity}, {"plan", to_json(*best)}}));
      }
    } else if (iso->parsed()) {
      const auto c = iso_c ? std::optional<double>(parse_count(*iso_c)) : std::nullopt;
      if (c) check_budget(ComputeBudget{*c});
      if (iso_s.empty()) iso_s.push_back(0.0);
      for (double s : iso_s) check_sparsity(s);
      const CoefficientSet coeffs = load(iso_src);
      const ComputeBudget budget_c{required(c, "-C")};
      auto [lo, hi] = default_n_range(budget_c);
      if (n_min) lo = parse_count(*n_min);
      if (n_max) hi = parse_count(*n_max);
      std::vector<IsoflopCurve> curves;
      for (double s : iso_s) curves.push_back(isoflop_curve(coeffs, budget_c, s, lo, hi, samples));
      if (iso_format == "csv") {
        emit(output, out, curves_csv(curves));
      } else if (iso_format == "svg") {
        emit(output, out, curves_svg(curves));
      } else {
        emit(output, out, dump(curves_json(curves, threshold)));
      }
    } else if (compare->parsed()) {
      if (cmp_s) check_sparsity(*cmp_s);
      const CoefficientSet a = load(src_a, "-a");
      const CoefficientSet b = load(src_b, "-b");
      if (!cmp_grid) throw ParseError("--grid is required");
      std::vector<ModelScale> grid = load_grid(*cmp_grid);
      if (cmp_s) {
        for (auto& scale : grid) scale.sparsity = *cmp_s;
      }
      const DivergenceReport report = compare_laws(a, b, grid);
      if (cmp_format == "json") {
        emit(output, out, dump(divergence_json(report)));
      } else if (cmp_format == "csv") {
        emit(output, out, divergence_csv(report));
      } else {
        emit(output, out, divergence_text(report));
      }
    } else if (synth->parsed()) {
      const CoefficientSet coeffs = load(synth_src);
      if (!synth_grid) throw ParseError("--grid is required");
      const auto grid = load_grid(*synth_grid);
      emit(output, out, write_records(synthesize_dataset(coeffs, grid, noise, resolve_seed(seed_flag))));
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}

}  // namespace scalelaw::cli
