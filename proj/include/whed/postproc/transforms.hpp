#pragma once

#include "whed/core/rigid_transform.hpp"

namespace whed::postproc {

/// EEF pose in the palm-base frame: the phone pose moved through the fixed
/// phone -> EEF mount offset, then expressed in the base frame.
/// Equals T_base * phone_pose * T_eef_phone.
RigidTransform retarget_pose(const RigidTransform& phone_pose, const RigidTransform& T_eef_phone,
                             const RigidTransform& T_base);

}  // namespace whed::postproc
