#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "fpdesign/information.hpp"
#include "fpdesign/model_one_factor.hpp"
#include "helpers.hpp"

using namespace fpdesign;
using fptest::rel_err;

namespace {

FirstOrderParams random_fo(SeededRng& rng) {
  return {rng.normal(0, 1), rng.normal(2.5, 1.5),
          PowerValue(fptest::pick_alpha_nonzero(rng))};
}

// coefficients bounded away from zero for closed-form/inversion agreement
FirstOrderParams conditioned_fo(SeededRng& rng) {
  return {rng.normal(0, 1), fptest::away_from_zero(rng, 0.8, 4.0),
          PowerValue(fptest::pick_alpha_nonzero(rng))};
}

SecondOrderParams conditioned_so(SeededRng& rng) {
  return {rng.normal(0, 1), fptest::away_from_zero(rng, 0.8, 3.0),
          fptest::away_from_zero(rng, 0.8, 3.0),
          PowerValue(fptest::pick_alpha_nonzero(rng))};
}

template <int P>
double max_abs_residual(const SymMat<P>& m, const SymMat<P>& inv) {
  double worst = 0.0;
  for (int i = 0; i < P; ++i)
    for (int j = 0; j < P; ++j) {
      double s = 0.0;
      for (int k = 0; k < P; ++k) s += m(i, k) * inv(k, j);
      worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

}  // namespace

TEST_CASE("information matrix construction", "[information]") {
  FirstOrderModel model(FactorRange{0.1});
  SeededRng rng(101);

  SECTION("intercept cell counts the runs") {
    for (int i = 0; i < 20; ++i) {
      const auto d = fptest::random_design(rng, 4, 12, 0.1);
      const auto m = build_info(model, d, random_fo(rng));
      CHECK(m(0, 0) == Catch::Approx(12.0).epsilon(1e-14));
    }
  }

  SECTION("doubling every replication doubles every entry") {
    const auto d = fptest::random_design(rng, 4, 12, 0.1);
    Design d2 = d;
    for (auto& p : d2.points) p.rep *= 2;
    const auto theta = random_fo(rng);
    const auto m = build_info(model, d, theta);
    const auto m2 = build_info(model, d2, theta);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j <= i; ++j)
        CHECK(m2(i, j) == Catch::Approx(2.0 * m(i, j)).margin(1e-13));
  }

  SECTION("point order does not matter") {
    auto d = fptest::random_design(rng, 5, 14, 0.1);
    auto shuffled = d;
    std::reverse(shuffled.points.begin(), shuffled.points.end());
    const auto theta = random_fo(rng);
    const auto a = build_info(model, d, theta);
    const auto b = build_info(model, shuffled, theta);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j <= i; ++j)
        CHECK(a(i, j) == Catch::Approx(b(i, j)).margin(1e-12));
  }

  SECTION("two distinct levels cannot support three parameters") {
    const auto d = make_design({0.1, 1.0}, {6, 6});
    const auto m = build_info(model, d, random_fo(rng));
    CHECK_THROWS_AS(covariance(m), SingularInformation);
  }

  SECTION("positive semidefinite after a tiny diagonal shift") {
    for (int i = 0; i < 50; ++i) {
      const auto d = fptest::random_design(rng, 3 + rng.uniform_index(3), 12, 0.1);
      auto m = build_info(model, d, random_fo(rng));
      const double shift = 1e-10 * m.trace() + 1e-300;
      for (int k = 0; k < 3; ++k) m.at(k, k) += shift;
      CHECK(m.cholesky().ok());
    }
  }
}

TEST_CASE("covariance by symmetric solve", "[information]") {
  FirstOrderModel model(FactorRange{0.1});
  SeededRng rng(202);

  SECTION("identity inverts to identity") {
    SymMat<3> eye;
    for (int i = 0; i < 3; ++i) eye.at(i, i) = 1.0;
    const auto inv = covariance(eye);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j <= i; ++j)
        CHECK(inv(i, j) == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-15));
  }

  SECTION("residual of M * cov(M)") {
    for (int i = 0; i < 50; ++i) {
      const auto d = fptest::random_design(rng, 4, 12, 0.1);
      const auto m = build_info(model, d, random_fo(rng));
      CHECK(max_abs_residual(m, covariance(m)) < 1e-10);
    }
  }

  SECTION("singular failure carries the condition estimate") {
    const auto d = make_design({0.1, 1.0}, {6, 6});
    const auto m = build_info(model, d, random_fo(rng));
    try {
      covariance(m);
      FAIL("expected SingularInformation");
    } catch (const SingularInformation& e) {
      CHECK(e.rcond_estimate() < 1e-12);
    }
  }
}

TEST_CASE("first-order closed-form variances", "[information]") {
  FirstOrderModel model(FactorRange{0.1});
  SeededRng rng(303);

  SECTION("agreement with the inversion route") {
    for (int i = 0; i < 200; ++i) {
      const auto [d, theta] =
          fptest::random_conditioned_case(model, rng, 12, conditioned_fo);
      const auto closed = first_order_variances_closed(model, d, theta);
      const auto cov = covariance(build_info(model, d, theta));
      CHECK(rel_err(closed.var_gamma1, cov(1, 1)) < 1e-8);
      CHECK(rel_err(closed.var_alpha, cov(2, 2)) < 1e-8);
    }
  }

  SECTION("slope variance does not depend on the slope") {
    const auto d = make_design({0.1, 0.19, 0.52, 1.0}, {3, 4, 2, 3});
    FirstOrderParams theta{0.0, 2.5, PowerValue(-0.5)};
    FirstOrderParams scaled{0.0, 5.0, PowerValue(-0.5)};
    CHECK(first_order_variances_closed(model, d, theta).var_gamma1 ==
          Catch::Approx(first_order_variances_closed(model, d, scaled).var_gamma1)
              .epsilon(1e-12));
  }

  SECTION("replication scaling divides the variances") {
    const auto d = make_design({0.1, 0.19, 0.52, 1.0}, {3, 4, 2, 3});
    Design d3 = d;
    for (auto& p : d3.points) p.rep *= 3;
    const FirstOrderParams theta{0.0, 2.5, PowerValue(1.0)};
    const auto v1 = first_order_variances_closed(model, d, theta);
    const auto v3 = first_order_variances_closed(model, d3, theta);
    CHECK(v3.var_gamma1 == Catch::Approx(v1.var_gamma1 / 3.0).epsilon(1e-10));
    CHECK(v3.var_alpha == Catch::Approx(v1.var_alpha / 3.0).epsilon(1e-10));
  }

  SECTION("zero slope makes the power inestimable") {
    const auto d = make_design({0.1, 0.5, 1.0}, {4, 4, 4});
    CHECK_THROWS_AS(first_order_variances_closed(
                        model, d, {0.0, 0.0, PowerValue(1.0)}),
                    SingularInformation);
  }
}

TEST_CASE("second-order closed-form variances", "[information]") {
  SecondOrderModel model(FactorRange{0.1});
  SeededRng rng(404);

  SECTION("slope and curvature formulas agree with inversion") {
    for (int i = 0; i < 200; ++i) {
      const auto [d, theta] =
          fptest::random_conditioned_case(model, rng, 20, conditioned_so);
      const auto closed = second_order_variances_closed(model, d, theta);
      const auto cov = covariance(build_info(model, d, theta));
      CHECK(rel_err(closed.var_gamma1, cov(1, 1)) < 1e-8);
      CHECK(rel_err(closed.var_gamma11, cov(2, 2)) < 1e-8);
    }
  }

  SECTION("printed power-variance formula disagrees with inversion") {
    // The transcribed expression carries cross-term coefficients (1, 2)
    // where the true 4x4 cofactor has (2, 1). The inversion value is the
    // authoritative one; this documents the defect instead of hiding it.
    int mismatches = 0;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const auto [d, theta] =
          fptest::random_conditioned_case(model, rng, 20, conditioned_so);
      const auto closed = second_order_variances_closed(model, d, theta);
      const auto m = build_info(model, d, theta);
      const auto cov = covariance(m);
      const double err = rel_err(closed.var_alpha, cov(3, 3));
      worst = std::max(worst, err);
      if (err > 1e-6) ++mismatches;

      // swapping the cross-term coefficients back to the true cofactor
      // (2, 1) reproduces the inversion diagonal
      const double n = m(0, 0), m12 = m(0, 1), m13 = m(0, 2), m22 = m(1, 1),
                   m23 = m(1, 2), m33 = m(2, 2);
      const double det = std::exp(m.cholesky().log_det());
      const double corrected = (n * m22 * m33 - n * m23 * m23 -
                                m12 * m12 * m33 + 2.0 * m12 * m13 * m23 -
                                m13 * m13 * m22) /
                               det;
      CHECK(rel_err(corrected, cov(3, 3)) < 1e-8);
    }
    INFO("worst relative deviation of printed power formula: " << worst);
    CHECK(mismatches > 0);
  }

  SECTION("replication scaling") {
    const auto d = make_design({0.1, 0.17, 0.51, 0.62, 1.0}, {3, 6, 6, 1, 4});
    Design d2 = d;
    for (auto& p : d2.points) p.rep *= 2;
    const SecondOrderParams theta{0.0, 1.0, -2.5, PowerValue(-1.0)};
    const auto v1 = second_order_variances_closed(model, d, theta);
    const auto v2 = second_order_variances_closed(model, d2, theta);
    CHECK(v2.var_gamma1 == Catch::Approx(v1.var_gamma1 / 2.0).epsilon(1e-10));
    CHECK(v2.var_gamma11 == Catch::Approx(v1.var_gamma11 / 2.0).epsilon(1e-10));
  }
}
