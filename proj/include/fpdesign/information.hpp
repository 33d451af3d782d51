#ifndef FPDESIGN_INFORMATION_HPP
#define FPDESIGN_INFORMATION_HPP

#include <array>
#include <cmath>
#include <stdexcept>

#include "fpdesign/design.hpp"
#include "fpdesign/model_one_factor.hpp"
#include "fpdesign/symmat.hpp"

namespace fpdesign {

template <class Model>
std::array<double, Model::kParams> sensitivity_at(
    const Model& model, const DesignPoint& pt,
    const typename Model::Params& params) {
  if constexpr (Model::kFactors == 1) {
    return model.grad(pt.x[0], params);
  } else {
    return model.grad(pt.x[0], pt.x[1], params);
  }
}

//! Information matrix M = sum_i n_i f(x_i) f(x_i)' with unit error
//! variance. Criteria are invariant to the error variance up to a common
//! factor, so it is fixed at 1 throughout.
template <class Model>
SymMat<Model::kParams> build_info(const Model& model, const Design& design,
                                  const typename Model::Params& params) {
  if (design.factors() != Model::kFactors)
    throw std::invalid_argument("build_info: design/model factor mismatch");
  SymMat<Model::kParams> m;
  for (const auto& pt : design.points)
    m.add_outer(sensitivity_at(model, pt, params),
                static_cast<double>(pt.rep));
  return m;
}

//! Asymptotic covariance M^-1 (unit error variance) via a symmetric
//! Cholesky solve. Throws SingularInformation when the factorization
//! fails or the reciprocal-condition estimate falls below the singularity
//! threshold.
template <int P>
SymMat<P> covariance(const SymMat<P>& info) {
  const auto chol = info.cholesky();
  if (!chol.ok()) throw SingularInformation(0.0);
  const double rc = chol.rcond_estimate();
  if (rc < kSingularRcond) throw SingularInformation(rc);
  return chol.inverse();
}

struct FirstOrderVariances {
  double var_gamma1 = 0.0;
  double var_alpha = 0.0;
};

struct SecondOrderVariances {
  double var_gamma1 = 0.0;
  double var_gamma11 = 0.0;
  double var_alpha = 0.0;
};

namespace detail {

//! Guard for the cofactor denominators: fail when |d| is negligible
//! against the magnitude of its own terms.
inline void check_denominator(double d, double scale) {
  if (!(std::abs(d) > 1e-14 * scale))
    throw SingularInformation(scale > 0.0 ? std::abs(d) / scale : 0.0);
}

}  // namespace detail

//! Closed-form slope/power variances for the first-order model, written
//! as the explicit 3x3 cofactor expressions over the information matrix
//! entries. Exists as a cross-check and fast path for the general
//! covariance() route.
inline FirstOrderVariances first_order_variances_closed(
    const FirstOrderModel& model, const Design& design,
    const FirstOrderParams& params) {
  const auto M = build_info(model, design, params);
  const double n = M(0, 0);
  const double m12 = M(0, 1), m13 = M(0, 2);
  const double m22 = M(1, 1), m23 = M(1, 2), m33 = M(2, 2);
  const double terms[] = {n * m22 * m33, -n * m23 * m23, -m12 * m12 * m33,
                          2.0 * m12 * m13 * m23, -m13 * m13 * m22};
  double d = 0.0, scale = 0.0;
  for (double t : terms) {
    d += t;
    scale += std::abs(t);
  }
  detail::check_denominator(d, scale);
  FirstOrderVariances v;
  v.var_gamma1 = (n * m33 - m13 * m13) / d;
  v.var_alpha = (n * m22 - m12 * m12) / d;
  return v;
}

//! Closed-form variances for the second-order model, transcribed from the
//! published cofactor formulas. The slope and curvature expressions agree
//! with direct inversion; the power-variance expression is transcribed
//! as printed even though its cross-term coefficients are inconsistent
//! with the true 4x4 cofactor (see tests, which assert the inversion
//! value as the authoritative one).
inline SecondOrderVariances second_order_variances_closed(
    const SecondOrderModel& model, const Design& design,
    const SecondOrderParams& params) {
  const auto M = build_info(model, design, params);
  const double n = M(0, 0);
  const double m12 = M(0, 1), m13 = M(0, 2), m14 = M(0, 3);
  const double m22 = M(1, 1), m23 = M(1, 2), m24 = M(1, 3);
  const double m33 = M(2, 2), m34 = M(2, 3), m44 = M(3, 3);

  const double terms[] = {n * m22 * m33 * m44,
                          -n * m22 * m34 * m34,
                          -n * m23 * m23 * m44,
                          -n * m24 * m24 * m33,
                          2.0 * n * m23 * m24 * m34,
                          -m12 * m12 * m33 * m44,
                          2.0 * m12 * m23 * m13 * m44,
                          m12 * m12 * m34 * m34,
                          -2.0 * m12 * m23 * m14 * m34,
                          -2.0 * m12 * m24 * m13 * m34,
                          2.0 * m12 * m24 * m14 * m33,
                          -m22 * m13 * m13 * m44,
                          m13 * m13 * m24 * m24,
                          2.0 * m13 * m22 * m14 * m34,
                          -2.0 * m13 * m24 * m14 * m23,
                          -m22 * m14 * m14 * m33,
                          m14 * m14 * m23 * m23};
  double d = 0.0, scale = 0.0;
  for (double t : terms) {
    d += t;
    scale += std::abs(t);
  }
  detail::check_denominator(d, scale);

  SecondOrderVariances v;
  v.var_gamma1 = (n * m33 * m44 - n * m34 * m34 - m13 * m13 * m44 +
                  2.0 * m13 * m14 * m34 - m14 * m14 * m33) /
                 d;
  v.var_gamma11 = (n * m22 * m44 - n * m24 * m24 - m12 * m12 * m44 +
                   2.0 * m12 * m14 * m24 - m14 * m14 * m22) /
                  d;
  // Transcribed verbatim: single m12*m13*m23 cross term, doubled m13^2*m22.
  v.var_alpha = (n * m22 * m33 - n * m23 * m23 - m12 * m12 * m33 +
                 m12 * m13 * m23 - 2.0 * m13 * m13 * m22) /
                d;
  return v;
}

}  // namespace fpdesign

#endif  // FPDESIGN_INFORMATION_HPP
