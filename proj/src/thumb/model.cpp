#include "whed/thumb/model.hpp"

#include <fmt/format.h>

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>

namespace whed::thumb {

namespace {

Eigen::Matrix3d axis_rotation(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

std::string vec_text(const Vec3& v) { return fmt::format("{} {} {}", v.x(), v.y(), v.z()); }

}  // namespace

bool JointLimits::contains(const PassiveThumbState& q) const {
  return q.theta2 >= theta2_min && q.theta2 <= theta2_max && q.theta4 >= theta4_min &&
         q.theta4 <= theta4_max;
}

PassiveThumbState JointLimits::clamp(const PassiveThumbState& q) const {
  return {std::clamp(q.theta2, theta2_min, theta2_max), std::clamp(q.theta4, theta4_min, theta4_max)};
}

PhiCalibration PhiCalibration::fit(double phi_a, double theta2_a, double phi_b, double theta2_b) {
  if (phi_a == phi_b) throw DataError("phi calibration needs two distinct phi values");
  PhiCalibration c;
  c.gain = (theta2_b - theta2_a) / (phi_b - phi_a);
  c.offset = theta2_a - c.gain * phi_a;
  return c;
}

double map_phi_to_theta2(double phi, const PhiCalibration& calibration) {
  return calibration.gain * phi + calibration.offset;
}

void ThumbCouplingModel::validate() const {
  auto fail = [](const std::string& what) { throw DataError("invalid thumb geometry: " + what); };
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(fmt::format("{} must be > 0 (got {})", name, v));
  };
  positive(metacarpal_length, "metacarpal_length");
  positive(distal_length, "distal_length");
  positive(link_distal, "link_distal");
  positive(link_meta, "link_meta");
  if (!(metacarpal_attach >= 0.0) || !std::isfinite(metacarpal_attach)) fail("metacarpal_attach must be >= 0");
  if (!(distal_attach >= 0.0) || !std::isfinite(distal_attach)) fail("distal_attach must be >= 0");
  for (const auto& [v, name] : {std::pair{tm_axis, "tm_axis"}, std::pair{ip_axis, "ip_axis"},
                                std::pair{segment_direction, "segment_direction"}}) {
    if (!(v.norm() > 1e-12) || !v.allFinite()) fail(fmt::format("{} must be a nonzero vector", name));
  }
  if (!tm_origin.allFinite() || !exo_distal_point.allFinite() || !exo_meta_point.allFinite()) {
    fail("points must be finite");
  }
  if (!(limits.theta2_min <= limits.theta2_max) || !(limits.theta4_min <= limits.theta4_max)) {
    fail("joint limits must satisfy min <= max");
  }
  if (!std::isfinite(phi.gain) || !std::isfinite(phi.offset)) fail("phi calibration must be finite");
}

ThumbCouplingModel ThumbCouplingModel::from_config(const KeyValueConfig& c) {
  c.require_known({"tm_origin", "tm_axis", "segment_direction", "metacarpal_length",
                   "metacarpal_attach", "ip_axis", "distal_length", "distal_attach",
                   "exo_distal_point", "exo_meta_point", "link_distal", "link_meta", "theta2_min",
                   "theta2_max", "theta4_min", "theta4_max", "phi_gain", "phi_offset"});
  ThumbCouplingModel m;
  m.tm_origin = c.get_vec3("tm_origin", m.tm_origin);
  m.tm_axis = c.get_vec3("tm_axis", m.tm_axis);
  m.segment_direction = c.get_vec3("segment_direction", m.segment_direction);
  m.metacarpal_length = c.get_double("metacarpal_length", m.metacarpal_length);
  m.metacarpal_attach = c.get_double("metacarpal_attach", m.metacarpal_attach);
  m.ip_axis = c.get_vec3("ip_axis", m.ip_axis);
  m.distal_length = c.get_double("distal_length", m.distal_length);
  m.distal_attach = c.get_double("distal_attach", m.distal_attach);
  m.exo_distal_point = c.get_vec3("exo_distal_point", m.exo_distal_point);
  m.exo_meta_point = c.get_vec3("exo_meta_point", m.exo_meta_point);
  m.link_distal = c.get_double("link_distal", m.link_distal);
  m.link_meta = c.get_double("link_meta", m.link_meta);
  m.limits.theta2_min = c.get_double("theta2_min", m.limits.theta2_min);
  m.limits.theta2_max = c.get_double("theta2_max", m.limits.theta2_max);
  m.limits.theta4_min = c.get_double("theta4_min", m.limits.theta4_min);
  m.limits.theta4_max = c.get_double("theta4_max", m.limits.theta4_max);
  m.phi.gain = c.get_double("phi_gain", m.phi.gain);
  m.phi.offset = c.get_double("phi_offset", m.phi.offset);
  m.validate();
  return m;
}

std::string ThumbCouplingModel::to_config_text() const {
  std::string s;
  auto line = [&s](const char* key, const std::string& value) { s += fmt::format("{} = {}\n", key, value); };
  auto num = [](double v) { return fmt::format("{}", v); };
  line("tm_origin", vec_text(tm_origin));
  line("tm_axis", vec_text(tm_axis));
  line("segment_direction", vec_text(segment_direction));
  line("metacarpal_length", num(metacarpal_length));
  line("metacarpal_attach", num(metacarpal_attach));
  line("ip_axis", vec_text(ip_axis));
  line("distal_length", num(distal_length));
  line("distal_attach", num(distal_attach));
  line("exo_distal_point", vec_text(exo_distal_point));
  line("exo_meta_point", vec_text(exo_meta_point));
  line("link_distal", num(link_distal));
  line("link_meta", num(link_meta));
  line("theta2_min", num(limits.theta2_min));
  line("theta2_max", num(limits.theta2_max));
  line("theta4_min", num(limits.theta4_min));
  line("theta4_max", num(limits.theta4_max));
  line("phi_gain", num(phi.gain));
  line("phi_offset", num(phi.offset));
  return s;
}

AttachmentPoints attachment_points_unchecked(const PassiveThumbState& q, const ThumbCouplingModel& m) {
  const Vec3 dir = m.segment_direction.normalized();
  const Eigen::Matrix3d r4 = axis_rotation(m.tm_axis, q.theta4);
  const Eigen::Matrix3d r2 = axis_rotation(m.ip_axis, q.theta2);
  const Vec3 ip = m.tm_origin + r4 * (m.metacarpal_length * dir);
  return AttachmentPoints{ip + r4 * (r2 * (m.distal_attach * dir)),
                          m.tm_origin + r4 * (m.metacarpal_attach * dir)};
}

AttachmentPoints attachment_points(const PassiveThumbState& q, const ThumbCouplingModel& m) {
  if (!m.limits.contains(q)) {
    throw JointLimitError(fmt::format(
        "thumb joints out of limits: theta2 = {} (allowed [{}, {}]), theta4 = {} (allowed [{}, {}])",
        q.theta2, m.limits.theta2_min, m.limits.theta2_max, q.theta4, m.limits.theta4_min,
        m.limits.theta4_max));
  }
  return attachment_points_unchecked(q, m);
}

double Residuals::max_abs() const { return std::max(std::abs(distal), std::abs(metacarpal)); }

Residuals constraint_residual(const RigidTransform& body, const PassiveThumbState& q,
                              const ThumbCouplingModel& m) {
  const AttachmentPoints r = attachment_points_unchecked(q, m);
  return Residuals{(body.apply(m.exo_distal_point) - r.distal).norm() - m.link_distal,
                   (body.apply(m.exo_meta_point) - r.metacarpal).norm() - m.link_meta};
}

}  // namespace whed::thumb
