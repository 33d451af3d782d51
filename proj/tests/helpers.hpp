#ifndef FPDESIGN_TESTS_HELPERS_HPP
#define FPDESIGN_TESTS_HELPERS_HPP

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "fpdesign/design.hpp"
#include "fpdesign/information.hpp"
#include "fpdesign/power_transform.hpp"
#include "fpdesign/rng.hpp"

namespace fptest {

inline double rel_err(double got, double want) {
  const double scale = std::max(1.0, std::abs(want));
  return std::abs(got - want) / scale;
}

//! Central finite difference with step scaled to the parameter magnitude.
inline double central_diff(const std::function<double(double)>& f, double at,
                           double scale = 1.0) {
  const double h = 1e-6 * std::max(1.0, std::abs(scale));
  return (f(at + h) - f(at - h)) / (2.0 * h);
}

//! Random one-factor design with k distinct levels in [x_min, 1],
//! endpoints included, pairwise level separation at least min_gap, total
//! n runs.
inline fpdesign::Design random_design(fpdesign::SeededRng& rng, int k, int n,
                                      double x_min, double min_gap = 0.0) {
  std::vector<double> levels{x_min, 1.0};
  while (static_cast<int>(levels.size()) < k) {
    const double cand = x_min + (1.0 - x_min) * rng.uniform01();
    bool fits = true;
    for (double l : levels)
      if (std::abs(l - cand) < min_gap) fits = false;
    if (fits) levels.push_back(cand);
  }
  std::vector<int> reps(k, 1);
  for (int extra = n - k; extra > 0; --extra) reps[rng.uniform_index(k)] += 1;
  fpdesign::Design d;
  for (int i = 0; i < k; ++i) d.points.push_back({{levels[i]}, reps[i]});
  return d.normalized();
}

inline double pick_alpha_nonzero(fpdesign::SeededRng& rng) {
  const auto& set = fpdesign::kCanonicalPowerSet;
  for (;;) {
    const double a = set[rng.uniform_index(static_cast<int>(set.size()))];
    if (a != 0.0) return a;
  }
}

//! Draws (design, theta) pairs until the information matrix is decently
//! conditioned, so closed-form/inversion comparisons are not dominated by
//! roundoff on either route.
template <class Model, class ThetaGen>
std::pair<fpdesign::Design, typename Model::Params> random_conditioned_case(
    const Model& model, fpdesign::SeededRng& rng, int n, ThetaGen gen,
    double min_hadamard = 1e-6) {
  for (;;) {
    const int k = Model::kParams + rng.uniform_index(3);
    const auto d = random_design(rng, k, n, model.range().x_min, 0.05);
    const auto theta = gen(rng);
    const auto info = fpdesign::build_info(model, d, theta);
    const auto chol = info.cholesky();
    if (!chol.ok()) continue;
    // Hadamard ratio det(M)/prod(diag): bounds the cancellation in the
    // cofactor sums, so both variance routes stay accurate to ~1e-9.
    double log_prod = 0.0;
    for (int i = 0; i < Model::kParams; ++i) log_prod += std::log(info(i, i));
    if (chol.log_det() - log_prod >= std::log(min_hadamard)) return {d, theta};
  }
}

//! Magnitude bounded away from zero with a random sign: keeps sensitivity
//! columns from collapsing in conditioned-case generation.
inline double away_from_zero(fpdesign::SeededRng& rng, double lo, double hi) {
  const double mag = lo + (hi - lo) * rng.uniform01();
  return rng.uniform01() < 0.5 ? -mag : mag;
}

}  // namespace fptest

#endif  // FPDESIGN_TESTS_HELPERS_HPP
