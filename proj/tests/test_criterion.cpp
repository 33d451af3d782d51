#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "fpdesign/catalog.hpp"
#include "fpdesign/criterion.hpp"
#include "fpdesign/information.hpp"
#include "helpers.hpp"

using namespace fpdesign;
using fptest::rel_err;

namespace {

PriorSpec section6_prior(std::uint64_t seed = 20260809) {
  PriorSpec spec;
  AlphaPrior a;
  for (double v : kCanonicalPowerSet) a.support.push_back(PowerValue(v));
  a.mass = {0.15, 0.25, 0.25, 0.15, 0.10, 0.07, 0.03};
  spec.alpha = {a};
  spec.gamma = {GammaPrior::normal(2.5, 1.5)};
  spec.r = 200;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("weight matrices from target variances", "[criterion]") {
  SECTION("first order") {
    const WeightSpec ws{{1.0, 1.0}};
    auto w0 = weights_first_order(0.0, ws);
    CHECK(w0[0] == 0.0);
    CHECK(w0[1] == 1.0);
    CHECK(w0[2] == 0.0);
    auto w1 = weights_first_order(1.0, ws);
    CHECK(w1[1] == Catch::Approx(0.5));
    CHECK(w1[2] == Catch::Approx(0.5));
    auto w25 = weights_first_order(2.5, ws);
    CHECK(w25[1] == Catch::Approx(0.13793103448275862).epsilon(1e-12));
    CHECK(w25[2] == Catch::Approx(0.8620689655172413).epsilon(1e-12));
  }

  SECTION("second order") {
    const WeightSpec ws{{1.0, 1.0, 1.0}};
    auto wg0 = weights_second_order(0.0, -2.5, ws);
    CHECK(wg0[1] == 1.0);
    CHECK(wg0[2] == 0.0);
    CHECK(wg0[3] == 0.0);
    auto wc0 = weights_second_order(1.7, 0.0, ws);
    CHECK(wc0[1] == 0.0);
    CHECK(wc0[2] == 1.0);
    CHECK(wc0[3] == 0.0);
    auto w = weights_second_order(1.0, -2.5, ws);
    CHECK(w[1] == Catch::Approx(0.46296296296296297).epsilon(1e-12));
    CHECK(w[2] == Catch::Approx(0.07407407407407407).epsilon(1e-12));
    CHECK(w[3] == Catch::Approx(0.46296296296296297).epsilon(1e-12));
  }

  SECTION("entries are nonnegative and sum to one") {
    SeededRng rng(500);
    for (int i = 0; i < 200; ++i) {
      const WeightSpec ws2{{0.1 + rng.uniform01() * 10, 0.1 + rng.uniform01() * 10}};
      const auto wa = weights_first_order(rng.normal(0, 3), ws2);
      double s = 0.0;
      for (double v : wa) {
        CHECK(v >= 0.0);
        s += v;
      }
      CHECK(s == Catch::Approx(1.0).epsilon(1e-12));

      const WeightSpec ws3{{0.1 + rng.uniform01() * 10,
                            0.1 + rng.uniform01() * 10,
                            0.1 + rng.uniform01() * 10}};
      double g1 = rng.normal(0, 2), g11 = rng.normal(0, 2);
      if (g1 == 0.0 && g11 == 0.0) g1 = 1.0;
      const auto wb = weights_second_order(g1, g11, ws3);
      s = 0.0;
      for (double v : wb) {
        CHECK(v >= 0.0);
        s += v;
      }
      CHECK(s == Catch::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("local criterion values", "[criterion]") {
  FirstOrderModel model(FactorRange{0.1});
  SeededRng rng(600);

  SECTION("weighted trace composes weight times variance") {
    for (int i = 0; i < 50; ++i) {
      const auto d = fptest::random_design(rng, 4, 12, 0.1);
      FirstOrderParams theta{0.0, rng.normal(2.5, 1.5),
                             PowerValue(fptest::pick_alpha_nonzero(rng))};
      const WeightSpec ws{{1.0, 1.0}};
      const double got = weighted_as_local(model, d, theta, ws);
      const auto cov = covariance(build_info(model, d, theta));
      const auto w = weights_first_order(theta.gamma1, ws);
      CHECK(rel_err(got, w[1] * cov(1, 1) + w[2] * cov(2, 2)) < 1e-10);
    }
  }

  SECTION("single nonzero weight picks out one variance") {
    const auto d = fptest::random_design(rng, 4, 12, 0.1);
    const FirstOrderParams theta{0.0, 2.0, PowerValue(-1.0)};
    const auto info = build_info(model, d, theta);
    const auto cov = covariance(info);
    const WeightDiag<3> only_alpha{0.0, 0.0, 0.25};
    CHECK(rel_err(weighted_trace_value(info, only_alpha), 0.25 * cov(2, 2)) <
          1e-12);
  }

  SECTION("doubling replications halves the weighted trace") {
    const auto d = make_design({0.1, 0.19, 0.52, 1.0}, {3, 4, 2, 3});
    Design d2 = d;
    for (auto& p : d2.points) p.rep *= 2;
    const FirstOrderParams theta{0.0, 2.5, PowerValue(0.5)};
    const WeightSpec ws{{1.0, 1.0}};
    CHECK(weighted_as_local(model, d2, theta, ws) ==
          Catch::Approx(0.5 * weighted_as_local(model, d, theta, ws))
              .epsilon(1e-12));
  }

  SECTION("determinant criterion scaling and sentinels") {
    const auto d = make_design({0.1, 0.45, 1.0}, {4, 4, 4});
    const FirstOrderParams theta{0.0, 2.5, PowerValue(1.0)};
    Design d2 = d;
    for (auto& p : d2.points) p.rep *= 2;
    CHECK(d_local(model, d2, theta) ==
          Catch::Approx(d_local(model, d, theta) + 3.0 * std::log(2.0))
              .epsilon(1e-12));

    const auto singular = make_design({0.1, 1.0}, {6, 6});
    CHECK(d_local(model, singular, theta) ==
          -std::numeric_limits<double>::infinity());
    const WeightSpec ws{{1.0, 1.0}};
    CHECK(weighted_as_local(model, singular, theta, ws) ==
          std::numeric_limits<double>::infinity());
  }
}

TEST_CASE("pseudo-Bayesian criterion", "[criterion]") {
  FirstOrderModel model(FactorRange{0.1});
  const auto draws = sample_draws(section6_prior());
  const WeightSpec ws{{1.0, 1.0}};

  SECTION("single draw reduces to the local value") {
    DrawSet one;
    one.points = {draws.points[7]};
    one.weights = {1.0};
    const auto d = make_design({0.1, 0.3, 1.0}, {4, 4, 4});
    const auto rep = bayes_criterion(model, d, one, CriterionKind::WeightedAs, ws);
    CHECK(rep.value ==
          weighted_as_local(model, d, model.from_point(one.points[0]), ws));
  }

  SECTION("value is exactly the mean of the per-draw values") {
    const auto d = make_design({0.1, 0.19, 0.52, 1.0}, {3, 4, 2, 3});
    const auto rep = bayes_criterion(model, d, draws, CriterionKind::WeightedAs, ws);
    double s = 0.0;
    for (double v : rep.per_draw_values) s += v;
    CHECK(rep.value == s / rep.n_draws);
  }

  SECTION("invariant to draw order and design point order") {
    const auto d = make_design({0.1, 0.19, 0.52, 1.0}, {3, 4, 2, 3});
    DrawSet reversed = draws;
    std::reverse(reversed.points.begin(), reversed.points.end());
    std::reverse(reversed.weights.begin(), reversed.weights.end());
    Design dr = d;
    std::reverse(dr.points.begin(), dr.points.end());
    const double a =
        bayes_criterion(model, d, draws, CriterionKind::WeightedAs, ws).value;
    const double b =
        bayes_criterion(model, dr, reversed, CriterionKind::WeightedAs, ws).value;
    CHECK(rel_err(a, b) < 1e-12);
  }

  SECTION("near-optimal 12-run design beats the plain 3-level one") {
    const auto good = make_design({0.1, 0.19, 0.52, 1.0}, {3, 4, 2, 3});
    const auto plain = make_design({0.1, 0.55, 1.0}, {4, 4, 4});
    const double vg =
        bayes_criterion(model, good, draws, CriterionKind::WeightedAs, ws).value;
    const double vp =
        bayes_criterion(model, plain, draws, CriterionKind::WeightedAs, ws).value;
    CHECK(is_better(CriterionKind::WeightedAs, vg, vp));
  }

  SECTION("adding a replicate never increases the weighted trace") {
    SeededRng rng(700);
    for (int i = 0; i < 25; ++i) {
      const auto d = fptest::random_design(rng, 4, 12, 0.1);
      const double before =
          bayes_criterion(model, d, draws, CriterionKind::WeightedAs, ws).value;
      Design more = d;
      more.points[rng.uniform_index(int(more.points.size()))].rep += 1;
      const double after =
          bayes_criterion(model, more, draws, CriterionKind::WeightedAs, ws).value;
      CHECK(after <= before + 1e-12 * std::abs(before));
    }
  }

  SECTION("all-singular draw set is an error") {
    const auto singular = make_design({0.1, 1.0}, {6, 6});
    CHECK_THROWS_AS(
        bayes_criterion(model, singular, draws, CriterionKind::WeightedAs, ws),
        SingularInformation);
  }

  SECTION("infeasible run count is rejected") {
    const auto tiny = make_design({0.1, 1.0}, {1, 1});
    CHECK_THROWS_AS(
        bayes_criterion(model, tiny, draws, CriterionKind::WeightedAs, ws),
        std::invalid_argument);
  }
}

TEST_CASE("efficiency conventions", "[criterion]") {
  FirstOrderModel model(FactorRange{0.1});
  const auto draws = sample_draws(section6_prior());
  const WeightSpec ws{{1.0, 1.0}};
  const auto ref = make_design({0.1, 0.19, 0.52, 1.0}, {3, 4, 2, 3});
  const auto other = make_design({0.1, 0.55, 1.0}, {4, 4, 4});

  SECTION("self-efficiency is exactly 100") {
    CHECK(efficiency(model, ref, ref, draws, CriterionKind::WeightedAs, ws) ==
          100.0);
    CHECK(efficiency(model, ref, ref, draws, CriterionKind::D) == 100.0);
  }

  SECTION("ratio antisymmetry") {
    const double ab =
        efficiency(model, other, ref, draws, CriterionKind::WeightedAs, ws);
    const double ba =
        efficiency(model, ref, other, draws, CriterionKind::WeightedAs, ws);
    CHECK(ab * ba == Catch::Approx(10000.0).epsilon(1e-10));
    const double dab = efficiency(model, other, ref, draws, CriterionKind::D);
    const double dba = efficiency(model, ref, other, draws, CriterionKind::D);
    CHECK(dab * dba == Catch::Approx(10000.0).epsilon(1e-10));
  }

  SECTION("singular candidate scores zero") {
    const auto singular = make_design({0.1, 1.0}, {6, 6});
    CHECK(efficiency_from_values(std::numeric_limits<double>::infinity(), 1.0,
                                 CriterionKind::WeightedAs, 3) == 0.0);
    CHECK(efficiency_from_values(-std::numeric_limits<double>::infinity(), 1.0,
                                 CriterionKind::D, 3) == 0.0);
    (void)singular;
  }
}
