#include "whed/core/quaternion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace whed {

Quaternion::Quaternion(double w, double x, double y, double z) {
  if (!std::isfinite(w) || !std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
    throw std::invalid_argument("quaternion component is not finite");
  }
  const double norm = std::sqrt(w * w + x * x + y * y + z * z);
  if (norm < 1e-12) throw std::invalid_argument("quaternion norm is too small to normalize");
  w /= norm;
  x /= norm;
  y /= norm;
  z /= norm;
  const bool flip =
      w < 0.0 || (w == 0.0 && (x < 0.0 || (x == 0.0 && (y < 0.0 || (y == 0.0 && z < 0.0)))));
  const double s = flip ? -1.0 : 1.0;
  w_ = s * w;
  x_ = s * x;
  y_ = s * y;
  z_ = s * z;
}

Quaternion Quaternion::from_axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (!(n > 0.0)) throw std::invalid_argument("rotation axis must be nonzero");
  return exp(axis / n * angle);
}

Quaternion Quaternion::exp(const Vec3& v) {
  const double angle = v.norm();
  if (angle < 1e-12) return {1.0, 0.5 * v.x(), 0.5 * v.y(), 0.5 * v.z()};
  const double s = std::sin(0.5 * angle) / angle;
  return {std::cos(0.5 * angle), s * v.x(), s * v.y(), s * v.z()};
}

Quaternion Quaternion::from_matrix(const Eigen::Matrix3d& rotation) {
  const Eigen::Quaterniond q(rotation);
  return {q.w(), q.x(), q.y(), q.z()};
}

Quaternion Quaternion::conjugate() const { return {w_, -x_, -y_, -z_}; }

Vec3 Quaternion::rotate(const Vec3& v) const { return eigen() * v; }

Eigen::Matrix3d Quaternion::matrix() const { return eigen().toRotationMatrix(); }

Vec3 Quaternion::log() const {
  const Vec3 xyz(x_, y_, z_);
  const double s = xyz.norm();
  if (s < 1e-12) return 2.0 * xyz / w_;
  return 2.0 * std::atan2(s, w_) / s * xyz;
}

Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  const Eigen::Quaterniond q = a.eigen() * b.eigen();
  return {q.w(), q.x(), q.y(), q.z()};
}

double dot(const Quaternion& a, const Quaternion& b) { return a.coeffs().dot(b.coeffs()); }

double geodesic_angle(const Quaternion& a, const Quaternion& b) {
  const Eigen::Vector4d qa = a.coeffs();
  Eigen::Vector4d qb = b.coeffs();
  if (qa.dot(qb) < 0.0) qb = -qb;
  return 4.0 * std::atan2((qa - qb).norm(), (qa + qb).norm());
}

Quaternion slerp(const Quaternion& a, const Quaternion& b, double fraction) {
  if (fraction == 0.0) return a;
  const Eigen::Vector4d qa = a.coeffs();
  Eigen::Vector4d qb = b.coeffs();
  double d = qa.dot(qb);
  if (d < 0.0) {
    qb = -qb;
    d = -d;
  }
  d = std::min(d, 1.0);
  const double theta = std::acos(d);
  Eigen::Vector4d q;
  if (theta < 1e-6) {
    q = qa + fraction * (qb - qa);
  } else {
    const double inv = 1.0 / std::sin(theta);
    q = std::sin((1.0 - fraction) * theta) * inv * qa + std::sin(fraction * theta) * inv * qb;
  }
  return {q[0], q[1], q[2], q[3]};
}

}  // namespace whed
