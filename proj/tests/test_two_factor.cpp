#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "fpdesign/model_two_factor.hpp"
#include "helpers.hpp"

using namespace fpdesign;
using fptest::central_diff;
using fptest::rel_err;

namespace {

TwoFactorModel default_model() { return TwoFactorModel(TwoFactorRange{}); }

TwoFactorParams table_point(PowerValue a1, PowerValue a2) {
  TwoFactorParams p;
  p.gamma1 = p.gamma2 = p.gamma12 = 1.0;
  p.gamma11 = p.gamma22 = -2.5;
  p.alpha1 = a1;
  p.alpha2 = a2;
  return p;
}

}  // namespace

TEST_CASE("gamma/beta maps", "[two_factor]") {
  const auto model = default_model();

  SECTION("zero coefficients map to zero betas") {
    TwoFactorParams p;
    p.beta0 = 3.25;
    p.alpha1 = PowerValue(-1.0);
    p.alpha2 = PowerValue(0.5);
    const auto b = model.gamma_to_beta(p);
    CHECK(b.beta0 == 3.25);
    CHECK(b.beta1 == 0.0);
    CHECK(b.beta2 == 0.0);
    CHECK(b.beta11 == 0.0);
    CHECK(b.beta22 == 0.0);
    CHECK(b.beta12 == 0.0);
  }

  SECTION("interaction coefficient, raw metric") {
    TwoFactorParams p;
    p.gamma12 = 1.0;
    p.alpha1 = p.alpha2 = PowerValue(1.0);
    CHECK(model.gamma_to_beta(p).beta12 ==
          Catch::Approx(2.4691358024691357).epsilon(1e-14));
  }

  SECTION("round-trip over the 5-point power set") {
    const double alphas[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    SeededRng rng(2024);
    for (double a1 : alphas)
      for (double a2 : alphas)
        for (int i = 0; i < 40; ++i) {
          TwoFactorParams p;
          p.beta0 = rng.normal(0, 2);
          p.gamma1 = rng.normal(1, 2);
          p.gamma2 = rng.normal(1, 2);
          p.gamma11 = rng.normal(-2.5, 2);
          p.gamma22 = rng.normal(-2.5, 2);
          p.gamma12 = rng.normal(0, 2);
          p.alpha1 = PowerValue(a1);
          p.alpha2 = PowerValue(a2);
          const auto q =
              model.beta_to_gamma(model.gamma_to_beta(p), p.alpha1, p.alpha2);
          CHECK(std::abs(q.gamma1 - p.gamma1) < 1e-12);
          CHECK(std::abs(q.gamma2 - p.gamma2) < 1e-12);
          CHECK(std::abs(q.gamma11 - p.gamma11) < 1e-12);
          CHECK(std::abs(q.gamma22 - p.gamma22) < 1e-12);
          CHECK(std::abs(q.gamma12 - p.gamma12) < 1e-12);
        }
  }
}

TEST_CASE("two-factor evaluation", "[two_factor]") {
  const auto model = default_model();

  SECTION("constant surface") {
    TwoFactorParams p;
    p.beta0 = -1.75;
    p.alpha1 = PowerValue(0.0);
    p.alpha2 = PowerValue(2.0);
    CHECK(model.eval(0.3, 0.8, p) == Catch::Approx(-1.75));
  }

  SECTION("interaction double difference equals twice gamma12") {
    SeededRng rng(31);
    for (int i = 0; i < 60; ++i) {
      TwoFactorParams p = table_point(
          PowerValue(fptest::pick_alpha_nonzero(rng)), PowerValue(0.0));
      p.gamma12 = rng.normal(0, 2);
      const double dd = (model.eval(1, 1, p) - model.eval(0.1, 1, p)) -
                        (model.eval(1, 0.1, p) - model.eval(0.1, 0.1, p));
      CHECK(dd == Catch::Approx(2.0 * p.gamma12).margin(1e-10));
    }
  }

  SECTION("frozen spot values") {
    CHECK(model.eval(0.55, 0.55,
                     table_point(PowerValue(0.0), PowerValue(0.0))) ==
          Catch::Approx(2.9407893739721747).epsilon(1e-12));
    CHECK(model.eval(0.55, 0.40,
                     table_point(PowerValue(1.0), PowerValue(-1.0))) ==
          Catch::Approx(7.438271604938271).epsilon(1e-12));
  }

  SECTION("no-interaction surface decomposes into one-factor models") {
    SecondOrderModel one(FactorRange{0.1});
    SeededRng rng(17);
    for (int i = 0; i < 80; ++i) {
      TwoFactorParams p;
      p.beta0 = rng.normal(0, 1);
      p.gamma1 = rng.normal(1, 1);
      p.gamma2 = rng.normal(-1, 1);
      p.gamma11 = rng.normal(-2, 1);
      p.gamma22 = rng.normal(2, 1);
      p.gamma12 = 0.0;
      p.alpha1 = PowerValue(kCanonicalPowerSet[rng.uniform_index(7)]);
      p.alpha2 = PowerValue(kCanonicalPowerSet[rng.uniform_index(7)]);
      const double x1 = 0.1 + 0.9 * rng.uniform01();
      const double x2 = 0.1 + 0.9 * rng.uniform01();
      const double expect =
          p.beta0 + one.eval(x1, {0.0, p.gamma1, p.gamma11, p.alpha1}) +
          one.eval(x2, {0.0, p.gamma2, p.gamma22, p.alpha2});
      CHECK(model.eval(x1, x2, p) == Catch::Approx(expect).margin(1e-11));
    }
  }

  SECTION("outside range") {
    CHECK_THROWS_AS(model.eval(0.05, 0.5, table_point(PowerValue(1.0),
                                                      PowerValue(1.0))),
                    std::domain_error);
  }
}

TEST_CASE("two-factor sensitivities", "[two_factor]") {
  const auto model = default_model();

  SECTION("intercept entry is one; gamma entries constant in gamma") {
    SeededRng rng(41);
    for (int i = 0; i < 40; ++i) {
      auto p = table_point(PowerValue(kCanonicalPowerSet[rng.uniform_index(7)]),
                           PowerValue(kCanonicalPowerSet[rng.uniform_index(7)]));
      const double x1 = 0.1 + 0.9 * rng.uniform01();
      const double x2 = 0.1 + 0.9 * rng.uniform01();
      const auto g = model.grad(x1, x2, p);
      CHECK(g[0] == 1.0);
      auto q = p;
      q.gamma1 = rng.normal(0, 3);
      q.gamma2 = rng.normal(0, 3);
      q.gamma11 = rng.normal(0, 3);
      q.gamma22 = rng.normal(0, 3);
      q.gamma12 = rng.normal(0, 3);
      const auto g2 = model.grad(x1, x2, q);
      for (int j = 1; j <= 5; ++j) CHECK(g[j] == Catch::Approx(g2[j]));
    }
  }

  SECTION("interaction sensitivity corner identity") {
    const auto p = table_point(PowerValue(-0.5), PowerValue(2.0));
    const double dd = model.grad(1, 1, p)[5] - model.grad(0.1, 1, p)[5] -
                      model.grad(1, 0.1, p)[5] + model.grad(0.1, 0.1, p)[5];
    CHECK(dd == Catch::Approx(2.0).epsilon(1e-12));
  }

  SECTION("all eight entries against finite differences, power branches") {
    SeededRng rng(53);
    for (int i = 0; i < 150; ++i) {
      TwoFactorParams p;
      p.beta0 = rng.normal(0, 1);
      p.gamma1 = rng.normal(1, 0.5);
      p.gamma2 = rng.normal(1, 0.5);
      p.gamma11 = rng.normal(-2.5, 1);
      p.gamma22 = rng.normal(-2.5, 1);
      p.gamma12 = rng.normal(1, 0.5);
      p.alpha1 = PowerValue(fptest::pick_alpha_nonzero(rng));
      p.alpha2 = PowerValue(fptest::pick_alpha_nonzero(rng));
      const double x1 = 0.1 + 0.9 * rng.uniform01();
      const double x2 = 0.1 + 0.9 * rng.uniform01();
      const auto g = model.grad(x1, x2, p);

      auto fd_for = [&](auto setter, double at) {
        return central_diff(
            [&](double v) {
              auto q = p;
              setter(q, v);
              return model.eval(x1, x2, q);
            },
            at, at);
      };
      CHECK(rel_err(g[1], fd_for([](TwoFactorParams& q, double v) { q.gamma1 = v; },
                                 p.gamma1)) < 1e-6);
      CHECK(rel_err(g[2], fd_for([](TwoFactorParams& q, double v) { q.gamma2 = v; },
                                 p.gamma2)) < 1e-6);
      CHECK(rel_err(g[3], fd_for([](TwoFactorParams& q, double v) { q.gamma11 = v; },
                                 p.gamma11)) < 1e-6);
      CHECK(rel_err(g[4], fd_for([](TwoFactorParams& q, double v) { q.gamma22 = v; },
                                 p.gamma22)) < 1e-6);
      CHECK(rel_err(g[5], fd_for([](TwoFactorParams& q, double v) { q.gamma12 = v; },
                                 p.gamma12)) < 1e-6);
      CHECK(rel_err(g[6],
                    fd_for([](TwoFactorParams& q, double v) { q.alpha1 = PowerValue(v); },
                           p.alpha1.value())) < 1e-6);
      CHECK(rel_err(g[7],
                    fd_for([](TwoFactorParams& q, double v) { q.alpha2 = PowerValue(v); },
                           p.alpha2.value())) < 1e-6);
    }
  }

  SECTION("log-branch power sensitivities, regression values") {
    // chain-rule limits with log-branch symbol values; frozen from an
    // independent symbolic derivation
    const auto p00 = table_point(PowerValue(0.0), PowerValue(0.0));
    const auto g00 = model.grad(0.55, 0.40, p00);
    CHECK(g00[6] == Catch::Approx(1.59480542900877).epsilon(1e-12));
    CHECK(g00[7] == Catch::Approx(0.309192449139263).epsilon(1e-12));

    const auto p01 = table_point(PowerValue(0.0), PowerValue(1.0));
    const auto g01 = model.grad(0.55, 0.40, p01);
    CHECK(g01[6] == Catch::Approx(1.83269097865412).epsilon(1e-12));
    CHECK(g01[7] == Catch::Approx(-5.18233179658494).epsilon(1e-12));
  }

  SECTION("context-cached assembly matches the direct path") {
    SeededRng rng(77);
    for (int i = 0; i < 40; ++i) {
      auto p = table_point(PowerValue(kCanonicalPowerSet[rng.uniform_index(7)]),
                           PowerValue(kCanonicalPowerSet[rng.uniform_index(7)]));
      p.gamma12 = rng.normal(1, 1);
      const double x1 = 0.1 + 0.9 * rng.uniform01();
      const double x2 = 0.1 + 0.9 * rng.uniform01();
      const auto ctx = model.make_context(p);
      const auto g1 = model.grad_from_context(
          ctx, fp_transform(x1, p.alpha1), std::log(x1),
          fp_transform(x2, p.alpha2), std::log(x2));
      const auto g2 = model.grad(x1, x2, p);
      for (int j = 0; j < 8; ++j) CHECK(g1[j] == g2[j]);
    }
  }
}
