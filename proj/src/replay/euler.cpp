#include "whed/replay/euler.hpp"

#include "whed/core/angles.hpp"

#include <fmt/format.h>

#include <cmath>

namespace whed::replay {

EulerXYZ to_euler_xyz(const Quaternion& q) {
  const Eigen::Matrix3d r = q.matrix();
  EulerXYZ e;
  e.pitch = std::atan2(-r(2, 0), std::hypot(r(0, 0), r(1, 0)));
  if (std::abs(std::abs(e.pitch) - kPi / 2.0) < kGimbalMargin) {
    throw GimbalLockError(fmt::format("pitch {:.9g} rad is at the Euler singularity", e.pitch));
  }
  e.roll = std::atan2(r(2, 1), r(2, 2));
  e.yaw = std::atan2(r(1, 0), r(0, 0));
  return e;
}

Quaternion from_euler_xyz(const EulerXYZ& e) {
  return Quaternion::from_axis_angle(Vec3::UnitZ(), e.yaw) *
         Quaternion::from_axis_angle(Vec3::UnitY(), e.pitch) *
         Quaternion::from_axis_angle(Vec3::UnitX(), e.roll);
}

}  // namespace whed::replay
