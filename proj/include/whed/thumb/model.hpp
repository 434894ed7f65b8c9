#pragma once

#include "whed/core/error.hpp"
#include "whed/core/kvconfig.hpp"
#include "whed/core/rigid_transform.hpp"

#include <string>

namespace whed::thumb {

/// Passive-hand thumb joints: IP flexion (theta2) and TM abduction (theta4).
struct PassiveThumbState {
  double theta2 = 0.0;
  double theta4 = 0.0;
};

struct JointLimits {
  double theta2_min = 0.0;
  double theta2_max = 1.6;
  double theta4_min = -0.5;
  double theta4_max = 1.2;

  bool contains(const PassiveThumbState& q) const;
  PassiveThumbState clamp(const PassiveThumbState& q) const;
};

class JointLimitError : public DataError {
 public:
  using DataError::DataError;
};

/// theta2 = gain * phi + offset.
struct PhiCalibration {
  double gain = 1.0;
  double offset = 0.0;

  /// Exact line through two (phi, theta2) pairs. Throws DataError when the
  /// phi values coincide.
  static PhiCalibration fit(double phi_a, double theta2_a, double phi_b, double theta2_b);
};

/// Geometry of the two-segment passive-thumb chain and of the two linkages
/// tying it to the exoskeleton body E. Lengths in meters.
///
/// The chain rotates about the TM axis by theta4 at tm_origin, runs the
/// metacarpal segment along segment_direction, then rotates about the IP axis
/// (expressed in the rotated metacarpal frame) by theta2 and runs the distal
/// segment along the same local direction.
struct ThumbCouplingModel {
  Vec3 tm_origin = Vec3::Zero();
  Vec3 tm_axis = Vec3::UnitZ();
  Vec3 segment_direction = Vec3::UnitX();
  double metacarpal_length = 0.045;
  double metacarpal_attach = 0.0225;
  Vec3 ip_axis = Vec3::UnitY();
  double distal_length = 0.035;
  double distal_attach = 0.0175;

  Vec3 exo_distal_point{0.01, 0.0, 0.02};   ///< p_d in frame E
  Vec3 exo_meta_point{-0.02, 0.0, 0.02};    ///< p_m in frame E
  double link_distal = 0.03;                ///< L_d
  double link_meta = 0.04;                  ///< L_m

  JointLimits limits;
  PhiCalibration phi;

  /// Throws DataError on non-positive lengths, zero axes or empty limits.
  void validate() const;

  static ThumbCouplingModel from_config(const KeyValueConfig& config);
  std::string to_config_text() const;
};

struct AttachmentPoints {
  Vec3 distal;      ///< r_d
  Vec3 metacarpal;  ///< r_m
};

/// Throws JointLimitError when q is outside the model's limits.
AttachmentPoints attachment_points(const PassiveThumbState& q, const ThumbCouplingModel& model);
/// Same chain without the limit check.
AttachmentPoints attachment_points_unchecked(const PassiveThumbState& q,
                                             const ThumbCouplingModel& model);

struct ExoPose {
  RigidTransform body;  ///< T_E: exoskeleton body in the palm-base frame
  double phi = 0.0;     ///< instrumented IP angle
};

struct Residuals {
  double distal = 0.0;
  double metacarpal = 0.0;

  double max_abs() const;
};

/// Signed linkage-length errors ||T_E p - r(q)|| - L. Evaluated for any q.
Residuals constraint_residual(const RigidTransform& body, const PassiveThumbState& q,
                              const ThumbCouplingModel& model);
inline Residuals constraint_residual(const ExoPose& exo, const PassiveThumbState& q,
                                     const ThumbCouplingModel& model) {
  return constraint_residual(exo.body, q, model);
}

double map_phi_to_theta2(double phi, const PhiCalibration& calibration);

}  // namespace whed::thumb
