#pragma once

#include <cmath>
#include <string>

namespace symflow {

// Predicted decay catalog for a symmetric flow: spatial envelope
// |u| = O(|x|^{-space_exponent}), vanishing vorticity moments through
// moment_order (-1 when no such claim holds), and the L^p time exponent
// time_const + time_over_p / p when has_time_claim.
struct DecayPrediction {
  std::string group;
  int dim = 3;
  double space_exponent = 0.0;
  int moment_order = -1;
  bool has_time_claim = false;
  double time_const = 0.0;
  double time_over_p = 0.0;

  // p >= 1; pass std::numeric_limits<double>::infinity() for the sup norm.
  double time_exponent(double p) const {
    return time_const + (std::isinf(p) ? 0.0 : time_over_p / p);
  }
};

// Catalog entries:
//   dim 2: C_n gamma = n+1; D_n gamma = n+1, moments through n-1,
//          L^p exponent -(n+1)/2 + 1/p.
//   dim 3: T/Td gamma = 5, moments through 2, exponent -5/2 + 3/(2p);
//          O/Th/Oh gamma = 6, moments through 3, exponent -3 + 3/(2p);
//          Y/Yh gamma = 8, moments through 5, exponent -4 + 3/(2p);
//          every other (prismatic-type) family: the generic bound gamma = 4
//          with no moment or time claim.
DecayPrediction predicted_rates(const std::string& group_name, int dim, int n = 0);

}  // namespace symflow
