#ifndef FPDESIGN_MODEL_ONE_FACTOR_HPP
#define FPDESIGN_MODEL_ONE_FACTOR_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fpdesign/param_point.hpp"
#include "fpdesign/power_transform.hpp"

namespace fpdesign {

//! Coded factor range [x_min, 1] with 0 < x_min < 1. The upper end is
//! fixed at 1 by the coding; only the lower end varies.
struct FactorRange {
  double x_min = 0.1;

  void validate() const {
    if (!(x_min > 0.0 && x_min < 1.0))
      throw std::invalid_argument("FactorRange: x_min must lie in (0,1), got " +
                                  std::to_string(x_min));
  }

  bool contains(double x) const { return x >= x_min && x <= 1.0; }
};

struct FirstOrderParams {
  double beta0 = 0.0;
  double gamma1 = 0.0;  // change in mean response from x_min to 1
  PowerValue alpha{1.0};
};

struct SecondOrderParams {
  double beta0 = 0.0;
  double gamma1 = 0.0;   // change in mean response from x_min to 1
  double gamma11 = 0.0;  // mean of the extremes minus the metric midpoint
  PowerValue alpha{1.0};
};

namespace detail {

//! Transformed-metric quantities shared by the one-factor models.
//! one = 1^(alpha), lo = x_min^(alpha), delta = one - lo. delta is never
//! zero for x_min in (0,1): the power branch has lo != 1 and the log
//! branch has lo = ln x_min < 0.
struct MetricFrame {
  double one, lo, delta, sum, log_lo;
  bool log_branch;
};

inline MetricFrame metric_frame(double x_min, PowerValue alpha) {
  MetricFrame f;
  f.log_branch = alpha.is_log();
  f.one = f.log_branch ? 0.0 : 1.0;
  f.lo = fp_transform(x_min, alpha);
  f.delta = f.one - f.lo;
  f.sum = f.one + f.lo;
  f.log_lo = std::log(x_min);
  return f;
}

inline void check_in_range(double x, const FactorRange& r, const char* op) {
  if (!r.contains(x))
    throw std::domain_error(std::string(op) + ": level " + std::to_string(x) +
                            " outside [" + std::to_string(r.x_min) + ", 1]");
}

}  // namespace detail

//! First-order fractional-polynomial model in the range-change
//! parameterization: eta = beta0 + gamma1 * x^(alpha) / (1^(alpha) -
//! x_min^(alpha)).
class FirstOrderModel {
 public:
  static constexpr int kParams = 3;
  static constexpr int kFactors = 1;
  using Params = FirstOrderParams;

  explicit FirstOrderModel(FactorRange range) : range_(range) {
    range_.validate();
  }

  const FactorRange& range() const { return range_; }

  double eval(double x, const Params& p) const {
    detail::check_in_range(x, range_, "eval_first_order");
    const auto f = detail::metric_frame(range_.x_min, p.alpha);
    return p.beta0 + p.gamma1 * fp_transform(x, p.alpha) / f.delta;
  }

  //! Sensitivities (d eta / d beta0, d/d gamma1, d/d alpha). The alpha
  //! entry follows the two-branch analytic formulas; the log branch is a
  //! fixed formula of its own, not a limit of the power branch.
  std::array<double, 3> grad(double x, const Params& p) const {
    const auto f = detail::metric_frame(range_.x_min, p.alpha);
    const double X = fp_transform(x, p.alpha);
    const double t = std::log(x);
    const double L = f.log_lo;
    std::array<double, 3> g;
    g[0] = 1.0;
    g[1] = X / f.delta;
    if (!f.log_branch) {
      const double d = f.delta;  // 1 - x_min^alpha
      g[2] = p.gamma1 * X * (d * t + f.lo * L) / (d * d);
    } else {
      g[2] = p.gamma1 * t * (L - t) / L;
    }
    return g;
  }

  Params from_point(const ParamPoint& pt) const {
    if (pt.gamma.size() != 1 || pt.alpha.size() != 1)
      throw std::invalid_argument(
          "FirstOrderModel: parameter point needs 1 gamma and 1 alpha");
    return Params{pt.beta0, pt.gamma[0], pt.alpha[0]};
  }

 private:
  FactorRange range_;
};

//! Second-order fractional-polynomial model in the range-change /
//! curvature parameterization:
//!   eta = beta0 + gamma1 * X/D + 4*gamma11 * (X^2 - S X) / D^2,
//! with X = x^(alpha), D = 1^(alpha) - x_min^(alpha), S = 1^(alpha) +
//! x_min^(alpha).
class SecondOrderModel {
 public:
  static constexpr int kParams = 4;
  static constexpr int kFactors = 1;
  using Params = SecondOrderParams;

  explicit SecondOrderModel(FactorRange range) : range_(range) {
    range_.validate();
  }

  const FactorRange& range() const { return range_; }

  double eval(double x, const Params& p) const {
    detail::check_in_range(x, range_, "eval_second_order");
    const auto f = detail::metric_frame(range_.x_min, p.alpha);
    const double X = fp_transform(x, p.alpha);
    return p.beta0 + p.gamma1 * X / f.delta +
           4.0 * p.gamma11 * (X * X - f.sum * X) / (f.delta * f.delta);
  }

  //! Sensitivities (d/d beta0, d/d gamma1, d/d gamma11, d/d alpha).
  std::array<double, 4> grad(double x, const Params& p) const {
    const auto f = detail::metric_frame(range_.x_min, p.alpha);
    const double X = fp_transform(x, p.alpha);
    const double t = std::log(x);
    const double L = f.log_lo;
    std::array<double, 4> g;
    g[0] = 1.0;
    g[1] = X / f.delta;
    g[2] = 4.0 * (X * X - f.sum * X) / (f.delta * f.delta);
    if (!f.log_branch) {
      const double m = f.lo;  // x_min^alpha
      const double d = f.delta;
      const double c_x_t = p.gamma1 * d * d - 4.0 * p.gamma11 * (1.0 - m * m);
      const double c_x =
          (p.gamma1 * d - 4.0 * p.gamma11 * (3.0 + m)) * m * L;
      const double c_x2 = 8.0 * p.gamma11 * m * L;
      const double c_x2_t = 8.0 * p.gamma11 * d;
      g[3] = (c_x_t * X * t + c_x * X + c_x2 * X * X + c_x2_t * X * X * t) /
             (d * d * d);
    } else {
      const double L2 = L * L;
      const double c_t = (4.0 * p.gamma11 + p.gamma1) * L2 * L;
      const double c_t2 =
          4.0 * p.gamma11 * (1.0 - 3.0 * L2) - p.gamma1 * (1.0 + L2);
      const double c_t3 = 8.0 * p.gamma11 * L;
      g[3] = (c_t * t + c_t2 * t * t + c_t3 * t * t * t) / (L2 * L);
    }
    return g;
  }

  Params from_point(const ParamPoint& pt) const {
    if (pt.gamma.size() != 2 || pt.alpha.size() != 1)
      throw std::invalid_argument(
          "SecondOrderModel: parameter point needs 2 gammas and 1 alpha");
    return Params{pt.beta0, pt.gamma[0], pt.gamma[1], pt.alpha[0]};
  }

 private:
  FactorRange range_;
};

}  // namespace fpdesign

#endif  // FPDESIGN_MODEL_ONE_FACTOR_HPP
