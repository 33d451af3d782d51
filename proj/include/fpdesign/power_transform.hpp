#ifndef FPDESIGN_POWER_TRANSFORM_HPP
#define FPDESIGN_POWER_TRANSFORM_HPP

#include <array>
#include <cmath>
#include <stdexcept>

namespace fpdesign {

//! Power exponent of the Box-Tidwell family, with exponent 0 meaning the
//! log branch. The log branch is selected by exact equality with zero,
//! never by a floating tolerance: the family is discontinuous at 0 in
//! this parameterization, so the two branches must not blend.
class PowerValue {
 public:
  constexpr PowerValue() = default;
  constexpr explicit PowerValue(double alpha) : alpha_(alpha) {}

  constexpr double value() const { return alpha_; }
  constexpr bool is_log() const { return alpha_ == 0.0; }

  friend constexpr bool operator==(PowerValue a, PowerValue b) {
    return a.alpha_ == b.alpha_;
  }
  friend constexpr bool operator!=(PowerValue a, PowerValue b) {
    return !(a == b);
  }
  friend constexpr bool operator<(PowerValue a, PowerValue b) {
    return a.alpha_ < b.alpha_;
  }

 private:
  double alpha_ = 1.0;
};

//! The seven-exponent set used for discrete priors on the power parameter.
inline constexpr std::array<double, 7> kCanonicalPowerSet = {-2.0, -1.0, -0.5,
                                                             0.0,  0.5,  1.0,
                                                             2.0};

//! x^(alpha): x^alpha for alpha != 0, log(x) for alpha == 0. Requires x > 0.
inline double fp_transform(double x, PowerValue alpha) {
  if (!(x > 0.0))
    throw std::domain_error("fp_transform: x must be positive, got " +
                            std::to_string(x));
  return alpha.is_log() ? std::log(x) : std::pow(x, alpha.value());
}

//! Inverse of fp_transform in x (used to map metric-space grids back to
//! factor levels). Requires t in the image of the transform.
inline double fp_inverse_transform(double t, PowerValue alpha) {
  if (alpha.is_log()) return std::exp(t);
  if (!(t > 0.0))
    throw std::domain_error(
        "fp_inverse_transform: transformed value must be positive for the "
        "power branch");
  return std::pow(t, 1.0 / alpha.value());
}

}  // namespace fpdesign

#endif  // FPDESIGN_POWER_TRANSFORM_HPP
