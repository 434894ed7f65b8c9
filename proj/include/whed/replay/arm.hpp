#pragma once

#include "whed/core/rigid_transform.hpp"
#include "whed/core/series.hpp"

namespace whed::replay {

/// Relative arm offset between consecutive frames: translation (m) and
/// fixed-axis xyz Euler increments (rad).
struct ArmAction {
  Vec3 translation = Vec3::Zero();
  Vec3 rotation = Vec3::Zero();  ///< roll, pitch, yaw increments
};

/// P_target = P_base plus the running sum of actions; each Euler component is
/// wrapped to [-pi, pi) before conversion. Throws GimbalLockError when P_base
/// itself has no Euler decomposition.
Series<RigidTransform> reconstruct_arm_trajectory(const Series<ArmAction>& actions,
                                                  const RigidTransform& base);

/// Inverse of reconstruct_arm_trajectory: component differences of
/// consecutive (translation, Euler) 6-vectors, the first frame against P_base,
/// rotation differences wrapped. Throws GimbalLockError naming the frame.
Series<ArmAction> extract_relative_actions(const Series<RigidTransform>& absolute,
                                           const RigidTransform& base);

}  // namespace whed::replay
