#pragma once

#include "whed/core/kvconfig.hpp"
#include "whed/core/rigid_transform.hpp"
#include "whed/core/types.hpp"

#include <array>
#include <cstdint>
#include <string>

namespace whed::sim {

using JointAngles = std::array<double, kChannelCount>;

/// Ground-truth hand motion: sinusoidal joint angles and a phone pose that
/// oscillates about a center. Per-component frequencies are in Hz.
struct HandTrajectory {
  JointAngles joint_base{0.6, 0.7, 0.7, 0.7, 0.7, 0.2};
  JointAngles joint_amplitude{0.4, 0.5, 0.5, 0.5, 0.5, 0.2};
  JointAngles joint_frequency_hz{0.30, 0.25, 0.27, 0.29, 0.31, 0.20};
  JointAngles joint_phase{0.0, 0.5, 1.0, 1.5, 2.0, 2.5};

  Vec3 position_center{0.10, 0.00, 0.30};
  Vec3 position_amplitude{0.05, 0.04, 0.03};
  Vec3 position_frequency_hz{0.25, 0.20, 0.15};
  Vec3 rotation_amplitude{0.20, 0.15, 0.30};  ///< rotation-vector components, rad
  Vec3 rotation_frequency_hz{0.20, 0.25, 0.15};

  JointAngles joints_at(double t_seconds) const;
  RigidTransform phone_pose_at(double t_seconds) const;
};

/// Per-channel affine angle -> ADC count map, count = offset + scale * angle.
struct AdcMap {
  std::array<double, kChannelCount> offset{500, 520, 480, 510, 490, 505};
  std::array<double, kChannelCount> scale{1800, 1750, 1850, 1800, 1780, 1820};  ///< counts/rad

  double count(std::size_t channel, double angle) const {
    return offset[channel] + scale[channel] * angle;
  }
};

struct NoiseConfig {
  double adc_noise_std = 2.0;        ///< Gaussian, counts
  double spike_probability = 1e-4;   ///< per sample
  double spike_magnitude = 4095.0;   ///< spikes are uniform within +/- this of the true count
};

/// Per-record network delay, uniform in [delay_min_ms, delay_max_ms].
struct JitterConfig {
  double delay_min_ms = 0.0;
  double delay_max_ms = 6.0;
};

struct ClockSkew {
  double encoder_ppm = 20.0;
  double pose_ppm = -35.0;
  double camera_ppm = 15.0;
};

/// Everything a simulated session depends on. Simulator outputs are pure
/// functions of this value.
struct Scenario {
  double duration_s = 10.0;
  std::uint64_t seed = 1;
  HandTrajectory trajectory;
  AdcMap adc;
  NoiseConfig noise;
  JitterConfig jitter;
  ClockSkew skew;
  double pose_rate_hz = 100.0;
  double camera_rate_hz = 30.0;
  double usb_latency_ms = 0.5;
  /// Joint angles of the "fully open" / "fully closed" calibration postures.
  double joint_open_rad = 0.0;
  double joint_closed_rad = 1.5;
  /// The rig's true phone -> EEF mount offset.
  RigidTransform mount = RigidTransform::from_translation(Vec3(0.0, -0.02, -0.10));

  /// Throws DataError on a violated invariant.
  void validate() const;

  /// Unknown keys are rejected; every key has a default.
  static Scenario from_config(const KeyValueConfig& config);
  /// Echo in the same key = value format from_config reads.
  std::string to_config_text() const;
};

/// Host time at which the pose device's clock reads `device_time`.
double pose_device_to_host_seconds(const Scenario& scenario, Timestamp device_time);

}  // namespace whed::sim
