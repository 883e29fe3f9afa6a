// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>
#include <random>

#include <doctest.h>

#include "scalelaw/coefficients.hpp"
#include "scalelaw/error.hpp"
#include "scalelaw/grids.hpp"
#include "scalelaw/laws.hpp"

using namespace scalelaw;

namespace {

// 40-digit reference values, regenerated by tests/oracles/law_values.py.
constexpr double kKaplan1e9 = 2.4196518191691775534;
constexpr double kKaplanAtCritical = 1.0740044716201243405;
constexpr double kHoffmannChinchilla = 1.9366454705587175041;
constexpr double kFrantarSparsest = 1.6046059275094008262;
constexpr double kAbnar98 = 2.6806622024884188937;
constexpr double kGeneralized90 = 2.4226623195413601569;
constexpr double kReformB = 62.271075330824138417;
constexpr double kDeepSeekSparsity = 0.94485842026825633383;

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

template <class T>
T published(LawId law) {
  return std::get<T>(published_coefficients(law));
}

const auto kKaplan = published<KaplanCoefficients>(LawId::kaplan);
const auto kHoffmann = published<HoffmannCoefficients>(LawId::hoffmann);
const auto kFrantar = published<FrantarCoefficients>(LawId::frantar);
const auto kReform = published<FrantarReformCoefficients>(LawId::frantar_reform);
const auto kAbnar = published<AbnarCoefficients>(LawId::abnar);
const auto kGeneralized = published<GeneralizedCoefficients>(LawId::generalized);

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_SUITE("laws") {
  TEST_CASE("published tables") {
    CHECK(kHoffmann == HoffmannCoefficients{1.69, 406.4, 410.7, 0.34, 0.28});
    CHECK(kGeneralized == GeneralizedCoefficients{1.69, 406.4, 410.7, 93.45, 0.34, 0.28, 1e-2});
    CHECK(kAbnar == AbnarCoefficients{0.94, 16612.50, 5455.67, 0.4598, 17.26, 0.5962, 0.3954, -0.1666, 0.1603, 0.1595});
    CHECK(kKaplan == KaplanCoefficients{0.076, 0.103, 6.4e13, 1.8e13});
    CHECK(kFrantar == FrantarCoefficients{16.8, 0.722, 45, 0.245, 6.90e8, 0.203, 0.651});
    CHECK(kReform == FrantarReformCoefficients{16.8, 0.722, 45, 62.271, 0.245, 0.203, 0.651});
    for (LawId law : kAllLaws) CHECK_NOTHROW(validate(published_coefficients(law)));
  }

  TEST_CASE("kaplan") {
    CHECK(rel(eval_kaplan(kKaplan, 1e9, 1e10), kKaplan1e9) <= 1e-10);
    CHECK(rel(eval_kaplan(kKaplan, kKaplan.n_c, kKaplan.d_c), kKaplanAtCritical) <= 1e-12);
    CHECK(eval_kaplan(kKaplan, kInf, kInf) == 0.0);
  }

  TEST_CASE("hoffmann") {
    CHECK(eval_hoffmann(kHoffmann, 1, 1) == 818.79);
    CHECK(eval_hoffmann(kHoffmann, kInf, kInf) == 1.69);
    CHECK(rel(eval_hoffmann(kHoffmann, 70e9, 1.4e12), kHoffmannChinchilla) <= 1e-10);
  }

  TEST_CASE("frantar") {
    CHECK(eval_frantar(kFrantar, 1, kFrantar.a_d, 0) == doctest::Approx(63.451).epsilon(1e-14));
    CHECK(rel(eval_frantar(kFrantar, 85e6, 65e9, 0.875), kFrantarSparsest) <= 1e-10);
    CHECK(eval_frantar(kFrantar, 1e8, 1e10, 0.2) > eval_frantar(kFrantar, 1e8, 1e10, 0.7));
  }

  TEST_CASE("frantar reform") {
    CHECK(eval_frantar_reform(kReform, 1, 1, 0) == doctest::Approx(124.722).epsilon(1e-14));
    CHECK(eval_frantar_reform(kReform, kInf, kInf, 0.3) == 0.651);

    const FrantarReformCoefficients r = reformat_frantar(kFrantar);
    CHECK(rel(r.b, kReformB) <= 1e-12);
    CHECK(rel(r.b, 62.271) <= 5e-3);
    CHECK(r.e == 0.651);
    CHECK(r.alpha == kFrantar.b_n);
    CHECK(r.beta == kFrantar.b_d);
    CHECK(r.a_s == kFrantar.a_s);
    CHECK(r.b_s == kFrantar.b_s);
    CHECK(r.c_s == kFrantar.c_s);
  }

  TEST_CASE("reformatted law agrees with the original on random points") {
    const FrantarReformCoefficients r = reformat_frantar(kFrantar);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> log_n(std::log(1e6), std::log(1e13));
    std::uniform_real_distribution<double> log_d(std::log(1e8), std::log(1e13));
    std::uniform_real_distribution<double> sparsity(0.0, 0.99);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double n = std::exp(log_n(rng)), d = std::exp(log_d(rng)), s = sparsity(rng);
      worst = std::max(worst, rel(eval_frantar_reform(r, n, d, s), eval_frantar(kFrantar, n, d, s)));
    }
    CHECK(worst <= 1e-10);
  }

  TEST_CASE("abnar") {
    // 0.94 + 16612.50 + 5455.67 + 0.4598 + 17.26
    CHECK(eval_abnar(kAbnar, 1, 1, 0) == doctest::Approx(22086.8298).epsilon(1e-14));
    CHECK(rel(eval_abnar(kAbnar, 1e9, 100e9, 0.98), kAbnar98) <= 1e-10);
    // The negative lambda term falls with s but the n^-gamma term grows; which
    // one wins depends on n (oracle: +0.02427 at n = 1e9, -0.01445 at n = 1e11).
    CHECK(eval_abnar(kAbnar, 1e9, 1e11, 0.5) - eval_abnar(kAbnar, 1e9, 1e11, 0.0) ==
          doctest::Approx(0.0242674851211492308).epsilon(1e-9));
    CHECK(eval_abnar(kAbnar, 1e11, 1e11, 0.5) - eval_abnar(kAbnar, 1e11, 1e11, 0.0) ==
          doctest::Approx(-0.0144472788082965018).epsilon(1e-9));
  }

  TEST_CASE("generalized") {
    CHECK(eval_generalized(kGeneralized, 1, 1, 0) == 818.79);
    CHECK(rel(eval_generalized(kGeneralized, 1e9, 20e9, 0.9), kGeneralized90) <= 1e-10);
  }

  TEST_CASE("generalized at zero sparsity is the dense law") {
    const auto ns = log_space(1e6, 1e13, 100);
    const auto ds = log_space(1e8, 1e13, 100);
    double worst = 0.0;
    for (double n : ns) {
      for (double d : ds) worst = std::max(worst, rel(eval_generalized(kGeneralized, n, d, 0), eval_hoffmann(kHoffmann, n, d)));
    }
    CHECK(worst <= 1e-12);
  }

  TEST_CASE("losses strictly decrease in n and d") {
    const auto grid = log_space(1e6, 1e13, 40);
    for (LawId law : kAllLaws) {
      CAPTURE(law_name(law));
      const CoefficientSet c = published_coefficients(law);
      for (double s : {0.0, 0.5, 0.9}) {
        if ((law == LawId::kaplan || law == LawId::hoffmann) && s != 0.0) continue;
        for (std::size_t i = 1; i < grid.size(); ++i) {
          REQUIRE(evaluate(c, {grid[i], 1e10, s}) < evaluate(c, {grid[i - 1], 1e10, s}));
          REQUIRE(evaluate(c, {1e9, grid[i], s}) < evaluate(c, {1e9, grid[i - 1], s}));
        }
      }
    }
  }

  TEST_CASE("generalized loss strictly decreases in sparsity") {
    for (double n : {1e7, 1e9, 1e11}) {
      double prev = eval_generalized(kGeneralized, n, 1e11, 0.0);
      for (int i = 1; i <= 99; ++i) {
        const double cur = eval_generalized(kGeneralized, n, 1e11, i / 100.0);
        REQUIRE(cur < prev);
        prev = cur;
      }
    }
  }

  TEST_CASE("domain errors") {
    CHECK_THROWS_WITH_AS(eval_generalized(kGeneralized, 1e9, 1e9, 1.0), "sparsity out of [0,1)", DomainError);
    CHECK_THROWS_AS(eval_frantar(kFrantar, 1e9, 1e9, -0.1), DomainError);
    CHECK_THROWS_AS(eval_hoffmann(kHoffmann, 0.5, 1e9), DomainError);
    CHECK_THROWS_AS(eval_kaplan(kKaplan, 1e9, std::nan("")), DomainError);
    CHECK_THROWS_AS(evaluate(kHoffmann, {1e9, 1e9, 1.5}), DomainError);
  }

  TEST_CASE("sparsity definitions") {
    CHECK(rel(sparsity_from_counts(671e9, 37e9), kDeepSeekSparsity) <= 1e-15);
    CHECK(sparsity_from_counts(5e9, 5e9) == 0.0);
    CHECK(sparsity_from_counts(8e9, 1e9) == 0.875);
    CHECK(sparsity_from_experts(64, 8) == 0.875);
    CHECK(sparsity_from_experts(16, 16) == 0.0);
    CHECK(sparsity_from_experts(50, 1) == doctest::Approx(0.98).epsilon(1e-15));
    CHECK_THROWS_AS(sparsity_from_counts(1e9, 2e9), DomainError);
    CHECK_THROWS_AS(sparsity_from_experts(8, 0), DomainError);
  }

  TEST_CASE("compute") {
    CHECK(compute_flops(70e9, 1.4e12).flops == doctest::Approx(5.88e23).epsilon(1e-15));
    CHECK(compute_flops(1, 1).flops == 6.0);
  }

  TEST_CASE("coefficient json") {
    for (LawId law : kAllLaws) {
      const CoefficientSet c = published_coefficients(law);
      CHECK(coefficients_from_json(to_json(c)) == c);
    }
    CHECK(to_json(kAbnar)["coefficients"].contains("d"));
    auto doc = to_json(kHoffmann);
    doc["coefficients"].erase("beta");
    CHECK_THROWS_AS(coefficients_from_json(doc), ParseError);
    CHECK_THROWS_AS(parse_law("chinchilla"), ParseError);
    CHECK_THROWS_AS(make_coefficients(LawId::hoffmann, std::vector<double>{1, 2}), DomainError);
  }
}
