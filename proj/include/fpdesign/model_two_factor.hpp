#ifndef FPDESIGN_MODEL_TWO_FACTOR_HPP
#define FPDESIGN_MODEL_TWO_FACTOR_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fpdesign/model_one_factor.hpp"
#include "fpdesign/param_point.hpp"
#include "fpdesign/power_transform.hpp"

namespace fpdesign {

//! Two-factor ranges [x1_min,1] x [x2_min,1], both lower ends in (0,1).
struct TwoFactorRange {
  double x1_min = 0.1;
  double x2_min = 0.1;

  void validate() const {
    FactorRange{x1_min}.validate();
    FactorRange{x2_min}.validate();
  }

  bool contains(double x1, double x2) const {
    return x1 >= x1_min && x1 <= 1.0 && x2 >= x2_min && x2 <= 1.0;
  }
};

//! Interpretable parameters of the two-factor second-order model:
//! per-factor slopes (range changes), per-factor curvatures
//! (extremes-vs-center contrasts) and the slope-difference interaction.
struct TwoFactorParams {
  double beta0 = 0.0;
  double gamma1 = 0.0, gamma2 = 0.0;    // per-factor slopes
  double gamma11 = 0.0, gamma22 = 0.0;  // per-factor curvatures
  double gamma12 = 0.0;                 // interaction
  PowerValue alpha1{1.0}, alpha2{1.0};
};

//! Raw regression coefficients of the same model. A derived view of
//! TwoFactorParams: the gamma form is primary because priors and weights
//! are expressed on it.
struct BetaVector {
  double beta0 = 0.0;
  double beta1 = 0.0, beta2 = 0.0;
  double beta11 = 0.0, beta22 = 0.0;
  double beta12 = 0.0;
};

class TwoFactorModel {
 public:
  static constexpr int kParams = 8;
  static constexpr int kFactors = 2;
  using Params = TwoFactorParams;

  //! Everything x-independent about one parameter point: metric frames,
  //! regression coefficients and their power-parameter derivatives.
  //! Search loops cache one per draw so per-candidate sensitivity
  //! assembly involves no power/log calls.
  struct DrawContext {
    detail::MetricFrame f1, f2;
    BetaVector b;
    // d beta / d alpha1 and / d alpha2 (beta0 is constant in alpha)
    double db1_a1, db11_a1, db12_a1, db2_a1;
    double db2_a2, db22_a2, db12_a2, db1_a2;
  };

  explicit TwoFactorModel(TwoFactorRange range) : range_(range) {
    range_.validate();
  }

  const TwoFactorRange& range() const { return range_; }

  //! Inverts the linear gamma(beta) system:
  //!   beta12 = 2 gamma12 / (D1 D2)
  //!   betakk = 4 gammakk / Dk^2
  //!   betak  = gammak/Dk - 4 gammakk Sk/Dk^2 - gamma12 Sk'/(D1 D2)
  //! with Dk = 1^(ak) - xk_min^(ak), Sk = 1^(ak) + xk_min^(ak). Dk is
  //! never zero for xk_min < 1.
  BetaVector gamma_to_beta(const Params& p) const {
    const auto f1 = detail::metric_frame(range_.x1_min, p.alpha1);
    const auto f2 = detail::metric_frame(range_.x2_min, p.alpha2);
    return betas(p, f1, f2);
  }

  //! Forward map from regression coefficients to the interpretable form.
  Params beta_to_gamma(const BetaVector& b, PowerValue alpha1,
                       PowerValue alpha2) const {
    const auto f1 = detail::metric_frame(range_.x1_min, alpha1);
    const auto f2 = detail::metric_frame(range_.x2_min, alpha2);
    Params p;
    p.beta0 = b.beta0;
    p.alpha1 = alpha1;
    p.alpha2 = alpha2;
    p.gamma1 = b.beta1 * f1.delta + b.beta11 * f1.delta * f1.sum +
               0.5 * b.beta12 * f1.delta * f2.sum;
    p.gamma2 = b.beta2 * f2.delta + b.beta22 * f2.delta * f2.sum +
               0.5 * b.beta12 * f2.delta * f1.sum;
    p.gamma11 = 0.25 * b.beta11 * f1.delta * f1.delta;
    p.gamma22 = 0.25 * b.beta22 * f2.delta * f2.delta;
    p.gamma12 = 0.5 * b.beta12 * f1.delta * f2.delta;
    return p;
  }

  DrawContext make_context(const Params& p) const {
    DrawContext c;
    c.f1 = detail::metric_frame(range_.x1_min, p.alpha1);
    c.f2 = detail::metric_frame(range_.x2_min, p.alpha2);
    c.b = betas(p, c.f1, c.f2);

    // d(xk_min^(ak))/d ak = xk_min^(ak) ln xk_min at branch values;
    // d(1^(ak))/d ak = 0 on both branches.
    const double mL1 = c.f1.lo * c.f1.log_lo;
    const double d1 = c.f1.delta, d1sq = d1 * d1, d1cu = d1sq * d1;
    c.db1_a1 = mL1 * (p.gamma1 / d1sq -
                      4.0 * p.gamma11 * (d1 + 2.0 * c.f1.sum) / d1cu -
                      p.gamma12 * c.f2.sum / (d1sq * c.f2.delta));
    c.db11_a1 = 8.0 * p.gamma11 * mL1 / d1cu;
    c.db12_a1 = 2.0 * p.gamma12 * mL1 / (d1sq * c.f2.delta);
    c.db2_a1 = -2.0 * p.gamma12 * mL1 * c.f1.one / (d1sq * c.f2.delta);

    const double mL2 = c.f2.lo * c.f2.log_lo;
    const double d2 = c.f2.delta, d2sq = d2 * d2, d2cu = d2sq * d2;
    c.db2_a2 = mL2 * (p.gamma2 / d2sq -
                      4.0 * p.gamma22 * (d2 + 2.0 * c.f2.sum) / d2cu -
                      p.gamma12 * c.f1.sum / (d2sq * c.f1.delta));
    c.db22_a2 = 8.0 * p.gamma22 * mL2 / d2cu;
    c.db12_a2 = 2.0 * p.gamma12 * mL2 / (d2sq * c.f1.delta);
    c.db1_a2 = -2.0 * p.gamma12 * mL2 * c.f2.one / (d2sq * c.f1.delta);
    return c;
  }

  //! Sensitivity vector from precomputed transforms: X1 = x1^(a1),
  //! t1 = ln x1, likewise for factor 2.
  std::array<double, 8> grad_from_context(const DrawContext& c, double X1,
                                          double t1, double X2,
                                          double t2) const {
    const double dX1 = X1 * t1, dX2 = X2 * t2;
    std::array<double, 8> g;
    g[0] = 1.0;
    g[1] = X1 / c.f1.delta;
    g[2] = X2 / c.f2.delta;
    g[3] = 4.0 * (X1 * X1 - c.f1.sum * X1) / (c.f1.delta * c.f1.delta);
    g[4] = 4.0 * (X2 * X2 - c.f2.sum * X2) / (c.f2.delta * c.f2.delta);
    g[5] = (2.0 * X1 * X2 - c.f2.sum * X1 - c.f1.sum * X2) /
           (c.f1.delta * c.f2.delta);
    g[6] = c.db1_a1 * X1 + c.b.beta1 * dX1 + c.db11_a1 * X1 * X1 +
           2.0 * c.b.beta11 * X1 * dX1 + c.db2_a1 * X2 + c.db12_a1 * X1 * X2 +
           c.b.beta12 * dX1 * X2;
    g[7] = c.db2_a2 * X2 + c.b.beta2 * dX2 + c.db22_a2 * X2 * X2 +
           2.0 * c.b.beta22 * X2 * dX2 + c.db1_a2 * X1 + c.db12_a2 * X1 * X2 +
           c.b.beta12 * dX2 * X1;
    return g;
  }

  double eval(double x1, double x2, const Params& p) const {
    if (!range_.contains(x1, x2))
      throw std::domain_error("eval_two_factor: (" + std::to_string(x1) +
                              ", " + std::to_string(x2) + ") outside range");
    const BetaVector b = gamma_to_beta(p);
    const double X1 = fp_transform(x1, p.alpha1);
    const double X2 = fp_transform(x2, p.alpha2);
    return b.beta0 + b.beta1 * X1 + b.beta11 * X1 * X1 + b.beta2 * X2 +
           b.beta22 * X2 * X2 + b.beta12 * X1 * X2;
  }

  //! Sensitivities (d/d beta0, gamma1, gamma2, gamma11, gamma22, gamma12,
  //! alpha1, alpha2). Gamma entries are the columns of the linear
  //! gamma->eta map; alpha entries come from the product rule over the
  //! beta(gamma, alpha) dependence, with d(u^(a))/da = u^(a) ln u and
  //! d(1^(a))/da = 0, symbols evaluated on their own branch. At alpha = 0
  //! this is the log-branch analytic limit of the same chain rule.
  std::array<double, 8> grad(double x1, double x2, const Params& p) const {
    const DrawContext c = make_context(p);
    return grad_from_context(c, fp_transform(x1, p.alpha1), std::log(x1),
                             fp_transform(x2, p.alpha2), std::log(x2));
  }

  Params from_point(const ParamPoint& pt) const {
    if (pt.gamma.size() != 5 || pt.alpha.size() != 2)
      throw std::invalid_argument(
          "TwoFactorModel: parameter point needs 5 gammas (g1, g2, g11, g22, "
          "g12) and 2 alphas");
    Params p;
    p.beta0 = pt.beta0;
    p.gamma1 = pt.gamma[0];
    p.gamma2 = pt.gamma[1];
    p.gamma11 = pt.gamma[2];
    p.gamma22 = pt.gamma[3];
    p.gamma12 = pt.gamma[4];
    p.alpha1 = pt.alpha[0];
    p.alpha2 = pt.alpha[1];
    return p;
  }

 private:
  static BetaVector betas(const Params& p, const detail::MetricFrame& f1,
                          const detail::MetricFrame& f2) {
    BetaVector b;
    b.beta0 = p.beta0;
    b.beta12 = 2.0 * p.gamma12 / (f1.delta * f2.delta);
    b.beta11 = 4.0 * p.gamma11 / (f1.delta * f1.delta);
    b.beta22 = 4.0 * p.gamma22 / (f2.delta * f2.delta);
    b.beta1 = p.gamma1 / f1.delta - b.beta11 * f1.sum - 0.5 * b.beta12 * f2.sum;
    b.beta2 = p.gamma2 / f2.delta - b.beta22 * f2.sum - 0.5 * b.beta12 * f1.sum;
    return b;
  }

  TwoFactorRange range_;
};

}  // namespace fpdesign

#endif  // FPDESIGN_MODEL_TWO_FACTOR_HPP
