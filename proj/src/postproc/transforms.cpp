#include "whed/postproc/transforms.hpp"

namespace whed::postproc {

RigidTransform retarget_pose(const RigidTransform& phone_pose, const RigidTransform& T_eef_phone,
                             const RigidTransform& T_base) {
  return compose(compose(T_base, phone_pose), T_eef_phone);
}

}  // namespace whed::postproc
