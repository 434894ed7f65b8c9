#pragma once

#include "whed/core/quaternion.hpp"

#include <Eigen/Core>

namespace whed {

/// Element of SE(3): x -> rotation * x + translation (meters).
class RigidTransform {
 public:
  RigidTransform() = default;
  /// Throws std::invalid_argument for a non-finite translation.
  RigidTransform(const Quaternion& rotation, const Vec3& translation);

  static RigidTransform identity() { return {}; }
  static RigidTransform from_translation(const Vec3& translation) {
    return {Quaternion::identity(), translation};
  }
  static RigidTransform from_rotation(const Quaternion& rotation) {
    return {rotation, Vec3::Zero()};
  }

  const Quaternion& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  Vec3 apply(const Vec3& point) const { return rotation_.rotate(point) + translation_; }
  Eigen::Matrix4d matrix() const;

  friend bool operator==(const RigidTransform& a, const RigidTransform& b) {
    return a.rotation_ == b.rotation_ && a.translation_ == b.translation_;
  }

 private:
  Quaternion rotation_;
  Vec3 translation_ = Vec3::Zero();
};

/// a-then-b frame composition; equals the homogeneous product A * B.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);
RigidTransform inverse(const RigidTransform& t);

inline RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
  return compose(a, b);
}

}  // namespace whed
