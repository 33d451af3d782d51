#ifndef FPDESIGN_CATALOG_HPP
#define FPDESIGN_CATALOG_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpdesign/design.hpp"
#include "fpdesign/model_one_factor.hpp"
#include "fpdesign/power_transform.hpp"
#include "fpdesign/priors.hpp"
#include "fpdesign/search.hpp"

namespace fpdesign {

//! k levels equally spaced in the x^(metric_alpha) metric between the
//! transformed endpoints, back-transformed, with n/k replicates each.
//! The range endpoints are set exactly; interior levels round-trip
//! through the metric.
inline Design equally_spaced(int k, PowerValue metric_alpha, int n,
                             const FactorRange& range) {
  range.validate();
  if (k < 2) throw std::invalid_argument("equally_spaced: k must be >= 2");
  if (n % k != 0)
    throw std::invalid_argument(
        "equally_spaced: equal replication needs k to divide n");
  const double lo = fp_transform(range.x_min, metric_alpha);
  const double hi = fp_transform(1.0, metric_alpha);
  Design d;
  for (int i = 0; i < k; ++i) {
    double level;
    if (i == 0)
      level = range.x_min;
    else if (i == k - 1)
      level = 1.0;
    else
      level = fp_inverse_transform(lo + i * (hi - lo) / (k - 1), metric_alpha);
    d.points.push_back({{level}, n / k});
  }
  return d.normalized();
}

enum class CcdKind { ThreeLevel, FiveLevel };

//! Replication pattern of the five-level one-factor projection of a
//! central composite design. The printed reference patterns for 12 and
//! 20 runs are fixtures; other run counts scale the 12-run pattern by
//! largest remainder and must keep every level occupied.
inline std::vector<int> ccd5_replication_pattern(int n) {
  if (n == 12) return {1, 2, 6, 2, 1};
  if (n == 20) return {1, 4, 10, 4, 1};
  const std::vector<double> base = {1.0 / 12, 2.0 / 12, 6.0 / 12, 2.0 / 12,
                                    1.0 / 12};
  auto counts = largest_remainder_counts(n, base);
  for (int c : counts)
    if (c < 1)
      throw std::invalid_argument(
          "ccd_projection: run count too small for the 5-level pattern");
  return counts;
}

//! One-factor projection of a central composite design laid out in the
//! x^(metric_alpha) metric.
//!  - 3-level: endpoints plus double-replicated metric midpoint, pattern
//!    (m, 2m, m) for n = 4m.
//!  - 5-level: axial points at the metric endpoints, factorial points at
//!    1/sqrt(2) of the half-range, center at the midpoint.
inline Design ccd_projection(CcdKind kind, PowerValue metric_alpha, int n,
                             const FactorRange& range) {
  range.validate();
  const double lo = fp_transform(range.x_min, metric_alpha);
  const double hi = fp_transform(1.0, metric_alpha);
  const double center = 0.5 * (lo + hi);
  Design d;
  if (kind == CcdKind::ThreeLevel) {
    if (n % 4 != 0)
      throw std::invalid_argument(
          "ccd_projection: 3-level pattern (m, 2m, m) needs n divisible by 4");
    const int m = n / 4;
    d.points.push_back({{range.x_min}, m});
    d.points.push_back({{fp_inverse_transform(center, metric_alpha)}, 2 * m});
    d.points.push_back({{1.0}, m});
  } else {
    const auto reps = ccd5_replication_pattern(n);
    const double half = 0.5 * (hi - lo);
    const double unit = half / std::sqrt(2.0);
    const double metric[5] = {lo, center - unit, center, center + unit, hi};
    for (int i = 0; i < 5; ++i) {
      double level;
      if (i == 0)
        level = range.x_min;
      else if (i == 4)
        level = 1.0;
      else
        level = fp_inverse_transform(metric[i], metric_alpha);
      d.points.push_back({{level}, reps[i]});
    }
  }
  return d.normalized();
}

//! Locally optimal design: the exchange search run against a single
//! parameter point instead of a prior sample.
template <class Model>
SearchResult locally_optimal(const Model& model, const ParamPoint& theta,
                             const SearchConfig& cfg, CriterionKind kind,
                             const WeightSpec& ws = {}) {
  DrawSet one;
  one.points = {theta};
  one.weights = {1.0};
  return point_exchange(model, cfg, one, kind, ws);
}

}  // namespace fpdesign

#endif  // FPDESIGN_CATALOG_HPP
