#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace whed {

using Vec3 = Eigen::Vector3d;

/// Unit quaternion stored as (w, x, y, z).
///
/// Every constructor normalizes and picks the w >= 0 representative
/// (first nonzero of x, y, z positive when w == 0), so two quaternions for the
/// same rotation compare equal component-wise.
class Quaternion {
 public:
  Quaternion() = default;

  /// Throws std::invalid_argument when a component is non-finite or the norm
  /// is too small to normalize.
  Quaternion(double w, double x, double y, double z);

  static Quaternion identity() { return {}; }
  static Quaternion from_axis_angle(const Vec3& axis, double angle);
  /// Rotation vector (axis * angle) to quaternion.
  static Quaternion exp(const Vec3& rotation_vector);
  static Quaternion from_matrix(const Eigen::Matrix3d& rotation);

  double w() const { return w_; }
  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }
  Eigen::Vector4d coeffs() const { return {w_, x_, y_, z_}; }

  Quaternion conjugate() const;
  Vec3 rotate(const Vec3& v) const;
  Eigen::Matrix3d matrix() const;
  /// Inverse of exp; returned angle lies in [0, pi].
  Vec3 log() const;

  friend Quaternion operator*(const Quaternion& a, const Quaternion& b);
  friend bool operator==(const Quaternion&, const Quaternion&) = default;

 private:
  Eigen::Quaterniond eigen() const { return {w_, x_, y_, z_}; }

  double w_ = 1.0;
  double x_ = 0.0;
  double y_ = 0.0;
  double z_ = 0.0;
};

double dot(const Quaternion& a, const Quaternion& b);

/// Rotation angle between two orientations, 2*acos(|<a,b>|), evaluated in a
/// form that stays accurate near zero.
double geodesic_angle(const Quaternion& a, const Quaternion& b);

/// Spherical interpolation along the shorter arc. fraction 0 returns a
/// exactly, 1 returns b.
Quaternion slerp(const Quaternion& a, const Quaternion& b, double fraction);

}  // namespace whed
