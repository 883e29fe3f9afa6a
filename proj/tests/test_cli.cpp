// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <doctest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "scalelaw/error.hpp"
#include "scalelaw/fit.hpp"
#include "scalelaw/laws.hpp"
#include "scalelaw/plan.hpp"
#include "scalelaw/records.hpp"

using namespace scalelaw;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// Scratch directory removed at scope exit.
struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("scalelaw-cli-" + std::to_string(std::rand()) + "-" +
                                       std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
    return path(name);
  }
  std::string read(const std::string& name) const {
    std::ifstream in(path(name), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }
};

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) row.push_back(std::stod(field));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("count parsing") {
    CHECK(cli::parse_count("400M") == 4e8);
    CHECK(cli::parse_count("1.5B") == 1.5e9);
    CHECK(cli::parse_count("10T") == 1e13);
    CHECK(cli::parse_count("6.9e8") == 6.9e8);
    CHECK_THROWS_AS(cli::parse_count("ten"), ParseError);
    CHECK_THROWS_AS(cli::parse_count("B"), ParseError);
    CHECK_THROWS_AS(cli::parse_count("1e9x"), ParseError);
  }

  TEST_CASE("eval") {
    CHECK(run({"eval", "--law", "hoffmann", "--published", "-n", "1", "-d", "1"}).out == "818.79\n");
    CHECK(run({"eval", "--law", "generalized", "--published", "-n", "1", "-d", "1", "-s", "0"}).out == "818.79\n");
    CHECK(run({"eval", "--law", "hoffmann", "-n", "70B", "-d", "1.4T"}).out == "1.93665\n");

    const Run bad = run({"eval", "--law", "generalized", "-s", "1.0"});
    CHECK(bad.code == cli::kExitDomain);
    CHECK(bad.err.find("sparsity out of [0,1)") != std::string::npos);
    CHECK(run({"eval", "--law", "hoffmann", "-n", "0.5", "-d", "1"}).code == cli::kExitDomain);
    CHECK(run({"eval", "--law", "hoffmann", "-n", "1"}).code == cli::kExitInput);
    CHECK(run({"eval", "--law", "gpt", "-n", "1", "-d", "1"}).code == cli::kExitInput);
  }

  TEST_CASE("flag errors") {
    CHECK(run({"eval", "--law", "hoffmann", "--frobnicate"}).code == cli::kExitInput);
    CHECK(run({}).code == cli::kExitInput);
    CHECK(run({"train"}).code == cli::kExitInput);
    CHECK(run({"fit", "--method", "anneal"}).code == cli::kExitInput);
    const Run help = run({"--help"});
    CHECK(help.code == cli::kExitOk);
    CHECK(help.out.find("isoflop") != std::string::npos);
  }

  TEST_CASE("tables") {
    const Run r = run({"tables"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::ordered_json::parse(r.out);
    REQUIRE(doc.size() == 6);
    const char* numerals[] = {"I", "II", "III", "IV", "V", "VI"};
    for (std::size_t i = 0; i < 6; ++i) {
      CHECK(doc[i]["table"] == numerals[i]);
      const LawId law = kAllLaws[i];
      CHECK(doc[i]["law"] == std::string(law_name(law)));
      const auto names = coefficient_names(law);
      const auto values = coefficient_values(published_coefficients(law));
      // Listed in table order, which need not match storage order.
      REQUIRE(doc[i]["coefficients"].size() == names.size());
      for (const auto& [name, value] : doc[i]["coefficients"].items()) {
        const auto k = std::find(names.begin(), names.end(), name) - names.begin();
        REQUIRE(k < static_cast<std::ptrdiff_t>(names.size()));
        CHECK(value.get<double>() == values[k]);
      }
    }
    CHECK(r.out.find("\"b\": 62.271") != std::string::npos);
    CHECK(r.out.find("\"lambda\": -0.1666") != std::string::npos);
  }

  TEST_CASE("fit from files") {
    const Scratch tmp;
    const std::string records = tmp.path("h9.csv");
    REQUIRE(run({"synth", "--law", "hoffmann", "--grid", "hoffmann9", "-o", records}).code == 0);

    nlohmann::json space;
    const auto values = coefficient_values(published_coefficients(LawId::hoffmann));
    const auto names = coefficient_names(LawId::hoffmann);
    for (std::size_t i = 0; i < names.size(); ++i) {
      space[std::string(names[i])] = {{"lower", values[i] * 0.5}, {"upper", values[i] * 1.5}, {"scale", "linear"}};
    }
    const std::string space_path = tmp.write("space.json", space.dump());

    const Run grid = run({"fit", "--law", "hoffmann", "--records", records, "--space", space_path, "--method", "grid",
                          "--points", "3", "--trace-csv", tmp.path("trace.csv")});
    REQUIRE(grid.code == 0);
    const FitResult result = fit_result_from_json(nlohmann::json::parse(grid.out));
    CHECK(result.objective <= 1e-6);
    CHECK(result.evaluations == 243);
    CHECK(tmp.read("trace.csv").rfind("index,objective,e,a,b,alpha,beta\n", 0) == 0);

    const std::vector<std::string> smbo = {"fit", "--law", "hoffmann", "--records", records, "--method", "smbo",
                                           "--budget", "60", "--refine", "200", "--seed", "5"};
    const Run first = run(smbo);
    REQUIRE(first.code == 0);
    CHECK(run(smbo).out == first.out);
    auto threaded = smbo;
    threaded.insert(threaded.end(), {"--workers", "3"});
    CHECK(run(threaded).out == first.out);
    const auto doc = nlohmann::json::parse(first.out);
    CHECK(doc["method"] == "smbo+local_refine");
    CHECK(doc["seed"] == 5);
    CHECK(doc["evaluations"].get<std::size_t>() == doc["trace"].size());

    // The fitted coefficients feed back into eval.
    const std::string fitted = tmp.write("fit.json", first.out);
    CHECK(run({"eval", "--coeffs", fitted, "-n", "1e9", "-d", "1e10"}).code == 0);
    CHECK(run({"eval", "--law", "abnar", "--coeffs", fitted, "-n", "1e9", "-d", "1e10"}).code == cli::kExitInput);
  }

  TEST_CASE("fit seed resolution") {
    const Scratch tmp;
    const std::string records = tmp.path("h9.csv");
    REQUIRE(run({"synth", "--law", "hoffmann", "--grid", "hoffmann9", "--noise", "0.05", "--seed", "3", "-o", records})
                .code == 0);
    const std::vector<std::string> base = {"fit", "--law", "hoffmann", "--records", records, "--method", "random",
                                           "--budget", "20"};
    CHECK(nlohmann::json::parse(run(base).out)["seed"] == 0);
    ::setenv("SCALELAW_SEED", "17", 1);
    CHECK(nlohmann::json::parse(run(base).out)["seed"] == 17);
    auto flagged = base;
    flagged.insert(flagged.end(), {"--seed", "4"});
    CHECK(nlohmann::json::parse(run(flagged).out)["seed"] == 4);
    ::setenv("SCALELAW_SEED", "seventeen", 1);
    CHECK(run(base).code == cli::kExitInput);
    ::unsetenv("SCALELAW_SEED");
  }

  TEST_CASE("fit input errors") {
    const Scratch tmp;
    const std::string bad = tmp.write("bad.csv", "n_active,sparsity,loss\n1e9,0,2.5\n");
    const Run missing = run({"fit", "--law", "hoffmann", "--records", bad});
    CHECK(missing.code == cli::kExitInput);
    CHECK(missing.err.find("row 1") != std::string::npos);
    CHECK(missing.err.find("d_tokens") != std::string::npos);
    CHECK(run({"fit", "--law", "hoffmann", "--records", tmp.path("absent.csv")}).code == cli::kExitInput);
    const std::string broken = tmp.write("space.json", "{not json");
    const std::string records = tmp.write("ok.csv", "n_active,d_tokens,sparsity,loss\n1e9,2e10,0,2.5\n");
    CHECK(run({"fit", "--law", "hoffmann", "--records", records, "--space", broken}).code == cli::kExitInput);
  }

  TEST_CASE("plan") {
    const Run sparse = run({"plan", "--law", "generalized", "--published", "-C", "1e20", "-s", "0"});
    const Run dense = run({"plan", "--law", "hoffmann", "-C", "1e20"});
    REQUIRE(sparse.code == 0);
    CHECK(allocation_plan_from_json(nlohmann::json::parse(sparse.out)) ==
          allocation_plan_from_json(nlohmann::json::parse(dense.out)));

    const Run grid = run({"plan", "--law", "generalized", "-C", "1e20", "--sparsity-grid", "0,0.5,0.9,0.98"});
    REQUIRE(grid.code == 0);
    const auto doc = nlohmann::json::parse(grid.out);
    CHECK(doc["s_best"] == 0.98);
    CHECK(allocation_plan_from_json(doc["plan"]).sparsity == 0.98);

    CHECK(run({"plan", "--law", "generalized", "-C", "0"}).code == cli::kExitDomain);
    CHECK(run({"plan", "--law", "hoffmann", "-C", "1e20", "-s", "0.5"}).code == cli::kExitDomain);
    CHECK(run({"plan", "--law", "abnar", "-C", "1e22", "-s", "0.9"}).code == 0);
  }

  TEST_CASE("isoflop") {
    const Run csv = run({"isoflop", "--law", "frantar", "-C", "1e20", "-s", "0.98", "--n-min", "1e7", "--n-max", "1e10",
                         "--format", "csv"});
    REQUIRE(csv.code == 0);
    const auto rows = csv_rows(csv.out);
    REQUIRE(rows.size() == 256);
    double lowest = INFINITY;
    std::size_t argmin = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i][3] < lowest) {
        lowest = rows[i][3];
        argmin = i;
      }
    }
    CHECK(rows.front()[3] / lowest > 1.20);
    CHECK(argmin > 0);
    CHECK(argmin + 1 < rows.size());

    const Run two = run({"isoflop", "--law", "generalized", "-C", "1e20", "-s", "0", "-s", "0.98"});
    std::set<double> series;
    for (const auto& row : csv_rows(two.out)) series.insert(row[0]);
    CHECK(series == std::set<double>{0.0, 0.98});

    const Run json = run({"isoflop", "--law", "generalized", "-C", "1e20", "-s", "0", "-s", "0.98", "--format", "json"});
    CHECK(nlohmann::json::parse(json.out).size() == 2);

    const Run svg = run({"isoflop", "--law", "frantar", "-C", "1e20", "-s", "0.5", "-s", "0.98", "--format", "svg"});
    REQUIRE(svg.code == 0);
    std::istringstream in(svg.out);
    boost::property_tree::ptree tree;
    CHECK_NOTHROW(boost::property_tree::read_xml(in, tree));
    CHECK(tree.count("svg") == 1);

    CHECK(run({"isoflop", "--law", "frantar", "-C", "1e20", "-s", "1.2"}).code == cli::kExitDomain);
    CHECK(run({"isoflop", "--law", "frantar", "-C", "1e20", "--format", "png"}).code == cli::kExitInput);
  }

  TEST_CASE("compare") {
    auto max_diff = [](const Run& r) { return nlohmann::json::parse(r.out)["max_abs_diff"].get<double>(); };
    const Run lemma = run({"compare", "--law-a", "generalized", "--law-b", "hoffmann", "--grid", "hoffmann9", "-s", "0",
                           "--format", "json"});
    REQUIRE(lemma.code == 0);
    CHECK(max_diff(lemma) <= 1e-12);
    CHECK(max_diff(run({"compare", "--law-a", "frantar_reform", "--law-b", "hoffmann", "--grid", "hoffmann9", "-s", "0",
                        "--format", "json"})) > 1.0);
    CHECK(max_diff(run({"compare", "--law-a", "abnar", "--law-b", "hoffmann", "--grid", "abnar35", "-s", "0",
                        "--format", "json"})) > 0.0);

    const Run text = run({"compare", "--law-a", "abnar", "--law-b", "hoffmann", "--grid", "abnar35", "-s", "0"});
    CHECK(text.out.find("max_abs_diff") != std::string::npos);

    const Scratch tmp;
    const std::string grid = tmp.write("grid.csv", "n_active,d_tokens,sparsity\n1e9,2e10,0\n4e9,8e10,0\n");
    const Run from_file = run({"compare", "--law-a", "hoffmann", "--law-b", "kaplan", "--grid", grid, "--format", "csv"});
    REQUIRE(from_file.code == 0);
    CHECK(csv_rows(from_file.out).size() == 2);
    CHECK(run({"compare", "--law-a", "hoffmann", "--law-b", "kaplan", "--grid", tmp.path("none.csv")}).code ==
          cli::kExitInput);
  }

  TEST_CASE("synth is deterministic") {
    const std::vector<std::string> args = {"synth", "--law", "abnar", "--grid", "abnar35", "--noise", "0.05", "--seed", "9"};
    const Run a = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == run(args).out);
    CHECK(parse_records(a.out).size() == 35);
  }
}
