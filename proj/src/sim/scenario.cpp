#include "whed/sim/scenario.hpp"

#include "whed/core/angles.hpp"
#include "whed/core/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace whed::sim {

namespace {

template <std::size_t N>
std::array<double, N> get_array(const KeyValueConfig& cfg, const std::string& key,
                                const std::array<double, N>& fallback) {
  const auto v = cfg.get_list(key, N, std::vector<double>(fallback.begin(), fallback.end()));
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = v[i];
  return out;
}

template <class Container>
std::string join(const Container& values) {
  std::string out;
  for (double v : values) {
    if (!out.empty()) out += ' ';
    out += fmt::format("{}", v);
  }
  return out;
}

std::string join3(const Vec3& v) { return fmt::format("{} {} {}", v.x(), v.y(), v.z()); }

}  // namespace

JointAngles HandTrajectory::joints_at(double t) const {
  JointAngles out{};
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = joint_base[i] +
             joint_amplitude[i] * std::sin(kTwoPi * joint_frequency_hz[i] * t + joint_phase[i]);
  }
  return out;
}

RigidTransform HandTrajectory::phone_pose_at(double t) const {
  Vec3 p;
  Vec3 r;
  for (int i = 0; i < 3; ++i) {
    p[i] = position_center[i] + position_amplitude[i] * std::sin(kTwoPi * position_frequency_hz[i] * t);
    r[i] = rotation_amplitude[i] * std::sin(kTwoPi * rotation_frequency_hz[i] * t + 0.7 * i);
  }
  return RigidTransform(Quaternion::exp(r), p);
}

void Scenario::validate() const {
  auto fail = [](const std::string& what) { throw DataError("invalid scenario: " + what); };
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) fail("duration_s must be > 0");
  if (!(noise.adc_noise_std >= 0.0)) fail("adc_noise_std must be >= 0");
  if (!(noise.spike_probability >= 0.0 && noise.spike_probability <= 1.0)) {
    fail("spike_probability must be in [0, 1]");
  }
  if (!(noise.spike_magnitude >= 0.0)) fail("spike_magnitude must be >= 0");
  if (!(jitter.delay_min_ms >= 0.0)) fail("delay_min_ms must be >= 0");
  if (!(jitter.delay_max_ms >= jitter.delay_min_ms)) fail("delay_max_ms must be >= delay_min_ms");
  if (!(pose_rate_hz > 0.0)) fail("pose_rate_hz must be > 0");
  if (!(camera_rate_hz > 0.0)) fail("camera_rate_hz must be > 0");
  if (!(usb_latency_ms >= 0.0)) fail("usb_latency_ms must be >= 0");
  for (double ppm : {skew.encoder_ppm, skew.pose_ppm, skew.camera_ppm}) {
    if (!(std::abs(ppm) < 1e5)) fail("clock skew must be below 1e5 ppm in magnitude");
  }
  if (joint_open_rad == joint_closed_rad) fail("joint_open_rad must differ from joint_closed_rad");
  for (std::size_t i = 0; i < kChannelCount; ++i) {
    if (adc.scale[i] == 0.0) fail("adc_scale entries must be nonzero");
    for (double angle : {joint_open_rad, joint_closed_rad}) {
      const double c = adc.count(i, angle);
      if (c < 0.0 || c > 4095.0) fail("calibration posture maps outside the ADC range");
    }
  }
}

Scenario Scenario::from_config(const KeyValueConfig& cfg) {
  cfg.require_known({"duration_s", "seed", "joint_base", "joint_amplitude", "joint_frequency_hz",
                     "joint_phase", "position_center", "position_amplitude",
                     "position_frequency_hz", "rotation_amplitude", "rotation_frequency_hz",
                     "adc_offset", "adc_scale", "adc_noise_std", "spike_probability",
                     "spike_magnitude", "delay_min_ms", "delay_max_ms", "encoder_skew_ppm",
                     "pose_skew_ppm", "camera_skew_ppm", "pose_rate_hz", "camera_rate_hz",
                     "usb_latency_ms", "joint_open_rad", "joint_closed_rad", "mount"});
  Scenario s;
  s.duration_s = cfg.get_double("duration_s", s.duration_s);
  s.seed = cfg.get_uint("seed", s.seed);

  auto& tr = s.trajectory;
  tr.joint_base = get_array(cfg, "joint_base", tr.joint_base);
  tr.joint_amplitude = get_array(cfg, "joint_amplitude", tr.joint_amplitude);
  tr.joint_frequency_hz = get_array(cfg, "joint_frequency_hz", tr.joint_frequency_hz);
  tr.joint_phase = get_array(cfg, "joint_phase", tr.joint_phase);
  tr.position_center = cfg.get_vec3("position_center", tr.position_center);
  tr.position_amplitude = cfg.get_vec3("position_amplitude", tr.position_amplitude);
  tr.position_frequency_hz = cfg.get_vec3("position_frequency_hz", tr.position_frequency_hz);
  tr.rotation_amplitude = cfg.get_vec3("rotation_amplitude", tr.rotation_amplitude);
  tr.rotation_frequency_hz = cfg.get_vec3("rotation_frequency_hz", tr.rotation_frequency_hz);

  s.adc.offset = get_array(cfg, "adc_offset", s.adc.offset);
  s.adc.scale = get_array(cfg, "adc_scale", s.adc.scale);
  s.noise.adc_noise_std = cfg.get_double("adc_noise_std", s.noise.adc_noise_std);
  s.noise.spike_probability = cfg.get_double("spike_probability", s.noise.spike_probability);
  s.noise.spike_magnitude = cfg.get_double("spike_magnitude", s.noise.spike_magnitude);
  s.jitter.delay_min_ms = cfg.get_double("delay_min_ms", s.jitter.delay_min_ms);
  s.jitter.delay_max_ms = cfg.get_double("delay_max_ms", s.jitter.delay_max_ms);
  s.skew.encoder_ppm = cfg.get_double("encoder_skew_ppm", s.skew.encoder_ppm);
  s.skew.pose_ppm = cfg.get_double("pose_skew_ppm", s.skew.pose_ppm);
  s.skew.camera_ppm = cfg.get_double("camera_skew_ppm", s.skew.camera_ppm);
  s.pose_rate_hz = cfg.get_double("pose_rate_hz", s.pose_rate_hz);
  s.camera_rate_hz = cfg.get_double("camera_rate_hz", s.camera_rate_hz);
  s.usb_latency_ms = cfg.get_double("usb_latency_ms", s.usb_latency_ms);
  s.joint_open_rad = cfg.get_double("joint_open_rad", s.joint_open_rad);
  s.joint_closed_rad = cfg.get_double("joint_closed_rad", s.joint_closed_rad);
  s.mount = cfg.get_pose("mount", s.mount);
  s.validate();
  return s;
}

std::string Scenario::to_config_text() const {
  std::string out;
  auto line = [&out](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  line("duration_s", fmt::format("{}", duration_s));
  line("seed", std::to_string(seed));
  line("joint_base", join(trajectory.joint_base));
  line("joint_amplitude", join(trajectory.joint_amplitude));
  line("joint_frequency_hz", join(trajectory.joint_frequency_hz));
  line("joint_phase", join(trajectory.joint_phase));
  line("position_center", join3(trajectory.position_center));
  line("position_amplitude", join3(trajectory.position_amplitude));
  line("position_frequency_hz", join3(trajectory.position_frequency_hz));
  line("rotation_amplitude", join3(trajectory.rotation_amplitude));
  line("rotation_frequency_hz", join3(trajectory.rotation_frequency_hz));
  line("adc_offset", join(adc.offset));
  line("adc_scale", join(adc.scale));
  line("adc_noise_std", fmt::format("{}", noise.adc_noise_std));
  line("spike_probability", fmt::format("{}", noise.spike_probability));
  line("spike_magnitude", fmt::format("{}", noise.spike_magnitude));
  line("delay_min_ms", fmt::format("{}", jitter.delay_min_ms));
  line("delay_max_ms", fmt::format("{}", jitter.delay_max_ms));
  line("encoder_skew_ppm", fmt::format("{}", skew.encoder_ppm));
  line("pose_skew_ppm", fmt::format("{}", skew.pose_ppm));
  line("camera_skew_ppm", fmt::format("{}", skew.camera_ppm));
  line("pose_rate_hz", fmt::format("{}", pose_rate_hz));
  line("camera_rate_hz", fmt::format("{}", camera_rate_hz));
  line("usb_latency_ms", fmt::format("{}", usb_latency_ms));
  line("joint_open_rad", fmt::format("{}", joint_open_rad));
  line("joint_closed_rad", fmt::format("{}", joint_closed_rad));
  const Vec3& t = mount.translation();
  const Quaternion& q = mount.rotation();
  line("mount", fmt::format("{} {} {} {} {} {} {}", t.x(), t.y(), t.z(), q.w(), q.x(), q.y(), q.z()));
  return out;
}

double pose_device_to_host_seconds(const Scenario& scenario, Timestamp device_time) {
  return static_cast<double>(device_time.count()) * 1e-9 / (1.0 + scenario.skew.pose_ppm * 1e-6);
}

}  // namespace whed::sim
