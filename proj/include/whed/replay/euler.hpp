#pragma once

#include "whed/core/error.hpp"
#include "whed/core/quaternion.hpp"

namespace whed::replay {

/// Fixed-axis x-y-z angles: R = Rz(yaw) * Ry(pitch) * Rx(roll).
struct EulerXYZ {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
};

class GimbalLockError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Pitch within this of +-pi/2 has no unique roll/yaw split.
inline constexpr double kGimbalMargin = 1e-6;

/// Angles in (-pi, pi]; pitch in [-pi/2, pi/2]. Throws GimbalLockError.
EulerXYZ to_euler_xyz(const Quaternion& q);
Quaternion from_euler_xyz(const EulerXYZ& e);

}  // namespace whed::replay
