#include "whed/core/rigid_transform.hpp"

#include <stdexcept>

namespace whed {

RigidTransform::RigidTransform(const Quaternion& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {
  if (!translation.allFinite()) throw std::invalid_argument("translation is not finite");
}

Eigen::Matrix4d RigidTransform::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation_.matrix();
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  return {a.rotation() * b.rotation(), a.rotation().rotate(b.translation()) + a.translation()};
}

RigidTransform inverse(const RigidTransform& t) {
  const Quaternion r = t.rotation().conjugate();
  return {r, -r.rotate(t.translation())};
}

}  // namespace whed
