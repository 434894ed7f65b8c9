#include "whed/core/angles.hpp"

#include <cmath>
#include <stdexcept>

namespace whed {

double wrap_angle(double radians) {
  if (!std::isfinite(radians)) throw std::domain_error("wrap_angle: input is not finite");
  if (radians >= -kPi && radians < kPi) return radians;
  // remainder() is exact and lands in [-pi, pi]; only the closed end needs fixing.
  double r = std::remainder(radians, kTwoPi);
  if (r >= kPi) {
    r -= kTwoPi;
  } else if (r < -kPi) {
    r += kTwoPi;
  }
  return r;
}

}  // namespace whed
