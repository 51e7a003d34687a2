#include "symflow/rates.hpp"

#include <stdexcept>

#include "symflow/group.hpp"

namespace symflow {

DecayPrediction predicted_rates(const std::string& group_name, int dim, int n) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("predicted_rates dim must be 2 or 3");
  auto parsed = parse_group_name(group_name, n);
  DecayPrediction p;
  p.group = group_name;
  p.dim = dim;

  if (dim == 2) {
    if (parsed.family != GroupFamily::C && parsed.family != GroupFamily::D)
      throw std::invalid_argument("2D catalog covers only the C and D families");
    if (parsed.n < 1 || parsed.n > 64) throw std::invalid_argument("catalog order out of range");
    p.space_exponent = parsed.n + 1;
    if (parsed.family == GroupFamily::D) {
      // The reflection is what forces the vorticity moments to cancel; pure
      // rotations leave the radial part untouched.
      p.moment_order = parsed.n - 1;
      p.has_time_claim = true;
      p.time_const = -(parsed.n + 1) / 2.0;
      p.time_over_p = 1.0;
    }
    return p;
  }

  switch (parsed.family) {
    case GroupFamily::T:
    case GroupFamily::Td:
      p.space_exponent = 5;
      p.moment_order = 2;
      break;
    case GroupFamily::O:
    case GroupFamily::Th:
    case GroupFamily::Oh:
      p.space_exponent = 6;
      p.moment_order = 3;
      break;
    case GroupFamily::Y:
    case GroupFamily::Yh:
      p.space_exponent = 8;
      p.moment_order = 5;
      break;
    default:
      // Everything non-polyhedral embeds in the full symmetry group of some
      // prism, where |x|^{-4} is the generic ceiling; no moment or time claim.
      if (family_is_parametric(parsed.family) && (parsed.n < 1 || parsed.n > 64))
        throw std::invalid_argument("catalog order out of range");
      p.space_exponent = 4;
      return p;
  }
  p.has_time_claim = true;
  p.time_const = -p.space_exponent / 2.0;  // sup-norm decay t^{-gamma/2}
  p.time_over_p = 1.5;
  return p;
}

}  // namespace symflow
