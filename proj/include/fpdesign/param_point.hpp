#ifndef FPDESIGN_PARAM_POINT_HPP
#define FPDESIGN_PARAM_POINT_HPP

#include <vector>

#include "fpdesign/power_transform.hpp"

namespace fpdesign {

//! One parameter vector at which a model's information is evaluated:
//! intercept, range/curvature/interaction coefficients in declaration
//! order, and one power exponent per factor. Models adapt this generic
//! form to their own typed parameter structs.
struct ParamPoint {
  double beta0 = 0.0;
  std::vector<double> gamma;
  std::vector<PowerValue> alpha;
};

}  // namespace fpdesign

#endif  // FPDESIGN_PARAM_POINT_HPP
