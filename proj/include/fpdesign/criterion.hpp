#ifndef FPDESIGN_CRITERION_HPP
#define FPDESIGN_CRITERION_HPP

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpdesign/design.hpp"
#include "fpdesign/information.hpp"
#include "fpdesign/model_one_factor.hpp"
#include "fpdesign/model_two_factor.hpp"
#include "fpdesign/priors.hpp"
#include "fpdesign/symmat.hpp"

namespace fpdesign {

//! Weighted-As is minimized (expected weighted trace of the covariance);
//! D is maximized (expected log determinant of the information matrix).
enum class CriterionKind { WeightedAs, D };

inline const char* to_string(CriterionKind k) {
  return k == CriterionKind::WeightedAs ? "weighted-As" : "D";
}

inline bool is_better(CriterionKind k, double a, double b) {
  return k == CriterionKind::WeightedAs ? a < b : a > b;
}

inline double worst_value(CriterionKind k) {
  return k == CriterionKind::WeightedAs
             ? std::numeric_limits<double>::infinity()
             : -std::numeric_limits<double>::infinity();
}

//! Relative weights derived from per-parameter target variances. Two
//! entries (slope, power) for the first-order model, three (slope,
//! curvature, power) for the second-order model.
struct WeightSpec {
  std::vector<double> w{1.0, 1.0};

  void validate(int expected) const {
    if (static_cast<int>(w.size()) != expected)
      throw std::invalid_argument("WeightSpec: expected " +
                                  std::to_string(expected) + " weights, got " +
                                  std::to_string(w.size()));
    for (double v : w)
      if (!(v > 0.0))
        throw std::invalid_argument("WeightSpec: weights must be positive");
  }
};

//! Diagonal of the criterion weight matrix; the intercept entry is always
//! zero and the rest sum to one whenever any entry is nonzero.
//! (The cast keeps the array extent a non-deduced context so P is pinned
//! by the SymMat argument.)
template <int P>
using WeightDiag = std::array<double, static_cast<std::size_t>(P)>;

//! First-order weights: W22 = w1/(w1 + w2 g1^2), W33 = w2 g1^2/(...).
//! As the slope vanishes the power weight vanishes with it.
inline WeightDiag<3> weights_first_order(double gamma1, const WeightSpec& ws) {
  ws.validate(2);
  const double den = ws.w[0] + ws.w[1] * gamma1 * gamma1;
  return {0.0, ws.w[0] / den, ws.w[1] * gamma1 * gamma1 / den};
}

//! Second-order weights over (slope, curvature, power):
//! numerators w1 g11^2, w2 g1^2, w3 g1^2 g11^2 over their sum.
inline WeightDiag<4> weights_second_order(double gamma1, double gamma11,
                                          const WeightSpec& ws) {
  ws.validate(3);
  const double g1s = gamma1 * gamma1, g11s = gamma11 * gamma11;
  const double num2 = ws.w[0] * g11s;
  const double num3 = ws.w[1] * g1s;
  const double num4 = ws.w[2] * g1s * g11s;
  const double den = num2 + num3 + num4;
  if (den == 0.0) return {0.0, 0.0, 0.0, 0.0};  // both coefficients exactly 0
  return {0.0, num2 / den, num3 / den, num4 / den};
}

template <class Model>
WeightDiag<Model::kParams> weight_diag_for(const Model&,
                                           const typename Model::Params& p,
                                           const WeightSpec& ws) {
  if constexpr (std::is_same_v<Model, FirstOrderModel>) {
    return weights_first_order(p.gamma1, ws);
  } else if constexpr (std::is_same_v<Model, SecondOrderModel>) {
    return weights_second_order(p.gamma1, p.gamma11, ws);
  } else {
    throw std::invalid_argument(
        "weighted-As criterion is defined for the one-factor models only");
  }
}

//! tr(W M^-1) from an information matrix, +infinity when (near-)singular.
template <int P>
double weighted_trace_value(const SymMat<P>& info, const WeightDiag<P>& w) {
  const auto chol = info.cholesky();
  if (!chol.ok() || chol.rcond_estimate() < kSingularRcond)
    return std::numeric_limits<double>::infinity();
  double v = 0.0;
  for (int i = 0; i < P; ++i)
    if (w[i] != 0.0) v += w[i] * chol.inverse_diagonal(i);
  return v;
}

//! log det M, -infinity when (near-)singular.
template <int P>
double log_det_value(const SymMat<P>& info) {
  const auto chol = info.cholesky();
  if (!chol.ok() || chol.rcond_estimate() < kSingularRcond)
    return -std::numeric_limits<double>::infinity();
  return chol.log_det();
}

//! Local weighted-As value of a design at one parameter point, with the
//! weight matrix built from that point's coefficients.
template <class Model>
double weighted_as_local(const Model& model, const Design& design,
                         const typename Model::Params& params,
                         const WeightSpec& ws) {
  const auto info = build_info(model, design, params);
  return weighted_trace_value(info, weight_diag_for(model, params, ws));
}

template <class Model>
double d_local(const Model& model, const Design& design,
               const typename Model::Params& params) {
  return log_det_value(build_info(model, design, params));
}

struct CriterionReport {
  double value = 0.0;
  std::vector<double> per_draw_values;
  std::vector<double> draw_weights;
  int n_draws = 0;
  CriterionKind kind = CriterionKind::WeightedAs;
  //! Weighted mean of diag(M^-1) over the draws; infinities pass through.
  std::vector<double> expected_variance;
};

namespace detail {

inline bool all_equal_weights(const std::vector<double>& w) {
  for (double v : w)
    if (v != w.front()) return false;
  return !w.empty();
}

//! Deterministic sequential reduction: plain mean when the weights are
//! uniform (so the value is exactly the arithmetic mean of the per-draw
//! values), weighted sum otherwise.
inline double combine(const std::vector<double>& values,
                      const std::vector<double>& weights) {
  if (all_equal_weights(weights)) {
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
  }
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * values[i];
  return s;
}

}  // namespace detail

template <class Model>
std::vector<typename Model::Params> typed_draws(const Model& model,
                                                const DrawSet& draws) {
  std::vector<typename Model::Params> out;
  out.reserve(draws.points.size());
  for (const auto& pt : draws.points) out.push_back(model.from_point(pt));
  return out;
}

//! Sample/quadrature approximation of the pseudo-Bayesian criterion: the
//! (weighted) mean over draws of the local value. Requires at least one
//! nonsingular draw.
template <class Model>
CriterionReport bayes_criterion(const Model& model, const Design& design,
                                const DrawSet& draws, CriterionKind kind,
                                const WeightSpec& ws = {}) {
  if (draws.points.empty())
    throw std::invalid_argument("bayes_criterion: empty draw set");
  if (design.n() < Model::kParams)
    throw std::invalid_argument(
        "bayes_criterion: fewer runs than model parameters");
  constexpr int P = Model::kParams;
  CriterionReport rep;
  rep.kind = kind;
  rep.n_draws = static_cast<int>(draws.points.size());
  rep.draw_weights = draws.weights;
  rep.per_draw_values.reserve(draws.points.size());
  rep.expected_variance.assign(P, 0.0);

  int nonsingular = 0;
  for (std::size_t j = 0; j < draws.points.size(); ++j) {
    const auto params = model.from_point(draws.points[j]);
    const auto info = build_info(model, design, params);
    double v;
    const auto chol = info.cholesky();
    const bool ok = chol.ok() && chol.rcond_estimate() >= kSingularRcond;
    if (!ok) {
      v = worst_value(kind);
      for (int i = 0; i < P; ++i)
        rep.expected_variance[i] = std::numeric_limits<double>::infinity();
    } else {
      ++nonsingular;
      if (kind == CriterionKind::WeightedAs) {
        const auto w = weight_diag_for(model, params, ws);
        v = 0.0;
        for (int i = 0; i < P; ++i) {
          const double vd = chol.inverse_diagonal(i);
          rep.expected_variance[i] += draws.weights[j] * vd;
          if (w[i] != 0.0) v += w[i] * vd;
        }
      } else {
        v = chol.log_det();
        for (int i = 0; i < P; ++i)
          rep.expected_variance[i] += draws.weights[j] * chol.inverse_diagonal(i);
      }
    }
    rep.per_draw_values.push_back(v);
  }
  if (nonsingular == 0)
    throw SingularInformation(0.0);
  rep.value = detail::combine(rep.per_draw_values, rep.draw_weights);
  return rep;
}

inline double efficiency_from_values(double candidate_value,
                                     double reference_value,
                                     CriterionKind kind, int p) {
  if (kind == CriterionKind::WeightedAs) {
    if (std::isinf(candidate_value)) return 0.0;
    return 100.0 * reference_value / candidate_value;
  }
  if (std::isinf(candidate_value) && candidate_value < 0.0) return 0.0;
  return 100.0 * std::exp((candidate_value - reference_value) / p);
}

//! Percentage efficiency of a candidate against a reference under common
//! draws. Weighted-As: criterion ratio reference/candidate. D: determinant
//! ratio per parameter, 100 * exp((candidate - reference)/p).
template <class Model>
double efficiency(const Model& model, const Design& candidate,
                  const Design& reference, const DrawSet& draws,
                  CriterionKind kind, const WeightSpec& ws = {}) {
  const double vc = bayes_criterion(model, candidate, draws, kind, ws).value;
  const double vr = bayes_criterion(model, reference, draws, kind, ws).value;
  return efficiency_from_values(vc, vr, kind, Model::kParams);
}

}  // namespace fpdesign

#endif  // FPDESIGN_CRITERION_HPP
