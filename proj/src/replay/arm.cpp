#include "whed/replay/arm.hpp"

#include "whed/core/angles.hpp"
#include "whed/replay/euler.hpp"

#include <fmt/format.h>

namespace whed::replay {

namespace {

Vec3 euler_vector(const Quaternion& q) {
  const EulerXYZ e = to_euler_xyz(q);
  return {e.roll, e.pitch, e.yaw};
}

}  // namespace

Series<RigidTransform> reconstruct_arm_trajectory(const Series<ArmAction>& actions,
                                                  const RigidTransform& base) {
  Series<RigidTransform> out;
  if (actions.empty()) return out;
  out.reserve(actions.size());
  const Vec3 base_euler = euler_vector(base.rotation());
  Vec3 sum_t = Vec3::Zero();
  Vec3 sum_r = Vec3::Zero();
  for (const auto& a : actions) {
    sum_t += a.value.translation;
    sum_r += a.value.rotation;
    const Vec3 angles = base_euler + sum_r;
    const EulerXYZ e{wrap_angle(angles.x()), wrap_angle(angles.y()), wrap_angle(angles.z())};
    out.push_back(a.t, RigidTransform(from_euler_xyz(e), base.translation() + sum_t));
  }
  return out;
}

Series<ArmAction> extract_relative_actions(const Series<RigidTransform>& absolute,
                                           const RigidTransform& base) {
  Series<ArmAction> out;
  out.reserve(absolute.size());
  Vec3 prev_t = base.translation();
  Vec3 prev_r = euler_vector(base.rotation());
  for (std::size_t i = 0; i < absolute.size(); ++i) {
    const auto& s = absolute[i];
    Vec3 r;
    try {
      r = euler_vector(s.value.rotation());
    } catch (const GimbalLockError& e) {
      throw GimbalLockError(fmt::format("frame {} (t = {} ns): {}", i, s.t.count(), e.what()));
    }
    ArmAction a;
    a.translation = s.value.translation() - prev_t;
    for (int k = 0; k < 3; ++k) a.rotation[k] = wrap_angle(r[k] - prev_r[k]);
    out.push_back(s.t, a);
    prev_t = s.value.translation();
    prev_r = r;
  }
  return out;
}

}  // namespace whed::replay
