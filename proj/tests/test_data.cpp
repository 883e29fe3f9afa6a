// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <set>

#include <doctest.h>

#include "scalelaw/error.hpp"
#include "scalelaw/grids.hpp"
#include "scalelaw/laws.hpp"
#include "scalelaw/records.hpp"
#include "scalelaw/synth.hpp"

using namespace scalelaw;

TEST_SUITE("data") {
  TEST_CASE("parse one dense record") {
    const auto records = parse_records("n_active,d_tokens,sparsity,loss\n1e9,20e9,0.0,2.5\n");
    REQUIRE(records.size() == 1);
    CHECK(records[0].scale == ModelScale{1e9, 20e9, 0.0});
    CHECK(records[0].loss == 2.5);
    CHECK_FALSE(records[0].compute.has_value());
  }

  TEST_CASE("columns in any order with optional fields") {
    const auto records = parse_records("source,loss,sparsity,compute,d_tokens,n_active\nrun-a,3.1,0.5,6e19,1e10,1e9\n");
    REQUIRE(records.size() == 1);
    CHECK(records[0].source == "run-a");
    CHECK(records[0].compute->flops == 6e19);
    CHECK(records[0].scale.sparsity == 0.5);
  }

  TEST_CASE("parse errors name row and column") {
    CHECK_THROWS_WITH_AS(parse_records("n_active,d_tokens,sparsity,loss\n1e9,2e10,1.0,2.5\n"),
                         doctest::Contains("sparsity out of [0,1)"), ParseError);
    CHECK_THROWS_WITH_AS(parse_records("n_active,d_tokens,sparsity,loss\n1e9,2e10,0,2.5\n1e9,abc,0,2\n"),
                         doctest::Contains("row 3"), ParseError);
    CHECK_THROWS_WITH_AS(parse_records("n_active,sparsity,loss\n1e9,0,2.5\n"), doctest::Contains("d_tokens"),
                         ParseError);
    CHECK_THROWS_AS(parse_records("n_active,d_tokens,sparsity,loss\n1e9,2e10,0\n"), ParseError);
    CHECK_THROWS_AS(parse_records("n_active,d_tokens,sparsity,loss\n1e9,2e10,0,-1\n"), ParseError);
    CHECK_THROWS_WITH_AS(parse_records("n_active,d_tokens,sparsity,loss\n1e16,2e10,0,2\n"),
                         doctest::Contains("2^53"), ParseError);
    CHECK_THROWS_AS(parse_records("n_active,d_tokens,sparsity,loss,compute\n1e9,1e10,0,2,1e10\n"), ParseError);
  }

  TEST_CASE("records round trip through csv") {
    const auto grid = reference_grid(GridSource::frantar48).scales;
    const auto records = synthesize_dataset(published_coefficients(LawId::frantar), grid, 0.05, 3);
    CHECK(parse_records(write_records(records)) == records);
    CHECK(parse_scales(write_scales(grid)) == grid);
  }

  TEST_CASE("token derivation") {
    CHECK(derive_tokens_from_compute({6e9}, 1e3) == 1e6);
    CHECK(derive_tokens_from_compute({1e20}, 1e9) == doctest::Approx(1e20 / 6e9).epsilon(1e-15));
  }

  TEST_CASE("shortest round-trip formatting") {
    for (double v : {0.1, 1.0 / 3.0, 6.4e13, 818.79, 1e-300}) CHECK(std::stod(format_double(v)) == v);
    CHECK(format_double(0.1) == "0.1");
  }

  TEST_CASE("reference grids") {
    const auto h = reference_grid(GridSource::hoffmann9).scales;
    REQUIRE(h.size() == 9);
    CHECK(h.front().n_active == doctest::Approx(400e6));
    CHECK(h.back().n_active == doctest::Approx(10e12));
    CHECK(h.front().d_tokens == doctest::Approx(8e9));
    CHECK(h.back().d_tokens == doctest::Approx(216.2e9));
    CHECK(std::all_of(h.begin(), h.end(), [](const ModelScale& m) { return m.sparsity == 0.0; }));

    const auto f = reference_grid(GridSource::frantar48).scales;
    CHECK(f.size() == 48);
    std::set<double> fs;
    for (const auto& m : f) fs.insert(m.sparsity);
    CHECK(fs == std::set<double>{0, 0.5, 0.75, 0.875});

    const auto a = reference_grid(GridSource::abnar35).scales;
    CHECK(a.size() == 35);
    std::set<double> as;
    for (const auto& m : a) {
      as.insert(m.sparsity);
      CHECK(m.n_active >= 329e6 * (1 - 1e-12));
      CHECK(m.n_active <= 21.2e9 * (1 + 1e-12));
    }
    CHECK(as == std::set<double>{0, 0.25, 0.5, 0.75, 0.90, 0.95, 0.98});

    CHECK(parse_grid_source("abnar35") == GridSource::abnar35);
    CHECK_THROWS_AS(parse_grid_source("chinchilla"), ParseError);
  }

  TEST_CASE("log space") {
    const auto v = log_space(1e6, 1e12, 7);
    REQUIRE(v.size() == 7);
    CHECK(v.front() == 1e6);
    CHECK(v.back() == 1e12);
    CHECK(v[3] == doctest::Approx(1e9));
    CHECK_THROWS_AS(log_space(1, 10, 1), DomainError);
  }

  TEST_CASE("noiseless synthesis reproduces the law") {
    const auto coeffs = published_coefficients(LawId::abnar);
    const auto grid = reference_grid(GridSource::abnar35).scales;
    const auto records = synthesize_dataset(coeffs, grid, 0.0, 11);
    REQUIRE(records.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(records[i].loss == evaluate(coeffs, grid[i]));
      CHECK(records[i].compute->flops == compute_flops(grid[i].n_active, grid[i].d_tokens).flops);
      CHECK(records[i].source == "synthetic:abnar");
    }
  }

  TEST_CASE("synthesis is deterministic per seed") {
    const auto coeffs = published_coefficients(LawId::hoffmann);
    const auto grid = reference_grid(GridSource::hoffmann9).scales;
    CHECK(synthesize_dataset(coeffs, grid, 0.05, 4) == synthesize_dataset(coeffs, grid, 0.05, 4));
    CHECK(synthesize_dataset(coeffs, grid, 0.05, 4) != synthesize_dataset(coeffs, grid, 0.05, 5));
  }

  TEST_CASE("noise is centred and truncated") {
    const auto coeffs = published_coefficients(LawId::hoffmann);
    const auto grid = std::vector<ModelScale>(1000, ModelScale{1e9, 2e10, 0.0});
    const auto records = synthesize_dataset(coeffs, grid, 0.05, 42);
    const double truth = evaluate(coeffs, grid[0]);
    double sum = 0.0;
    for (const auto& r : records) {
      const double eps = r.loss / truth - 1.0;
      REQUIRE(std::abs(eps) <= kNoiseTruncation * 0.05 + 1e-12);
      sum += eps;
    }
    CHECK(std::abs(sum / 1000.0) <= 0.01);
    CHECK_THROWS_AS(synthesize_dataset(coeffs, grid, -0.1, 1), DomainError);
  }
}
