#include "whed/sim/devices.hpp"

#include "whed/wire/encoder_frame.hpp"
#include "whed/wire/pose_record.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace whed::sim {

namespace {

enum class Device : std::uint32_t { Encoder = 1, Pose = 2, Camera = 3 };

/// Independent, reproducible generator per (seed, device).
std::mt19937_64 device_rng(std::uint64_t seed, Device device) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(device)};
  return std::mt19937_64(seq);
}

/// Number of ticks of a `rate_hz` clock that start before `duration_s` of that clock.
std::int64_t tick_count(double duration_s, double rate_hz) {
  const Timestamp end = from_seconds(duration_s);
  std::int64_t n = static_cast<std::int64_t>(std::ceil(duration_s * rate_hz)) + 1;
  while (n > 0 && tick_time(n - 1, rate_hz) >= end) --n;
  return n;
}

}  // namespace

AdcChannels ideal_counts(const Scenario& scenario, double t_seconds) {
  const JointAngles q = scenario.trajectory.joints_at(t_seconds);
  AdcChannels out{};
  for (std::size_t i = 0; i < kChannelCount; ++i) {
    out[i] = static_cast<std::uint16_t>(std::clamp(std::round(scenario.adc.count(i, q[i])), 0.0, 4095.0));
  }
  return out;
}

std::vector<TimedChunk> run_encoder_device(const Scenario& scenario) {
  constexpr double kRateHz = 1000.0;
  auto rng = device_rng(scenario.seed, Device::Encoder);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const std::int64_t n = tick_count(scenario.duration_s, kRateHz);
  const Timestamp latency = from_seconds(scenario.usb_latency_ms * 1e-3);
  std::vector<TimedChunk> chunks;
  chunks.reserve(static_cast<std::size_t>(n));

  for (std::int64_t k = 0; k < n; ++k) {
    const Timestamp sampled = device_to_host(tick_time(k, kRateHz), scenario.skew.encoder_ppm);
    const JointAngles q = scenario.trajectory.joints_at(to_seconds(sampled));
    AdcChannels counts{};
    for (std::size_t i = 0; i < kChannelCount; ++i) {
      const double truth = scenario.adc.count(i, q[i]);
      // Draw every variate unconditionally so one parameter never shifts the
      // random sequence seen by another.
      const double gaussian = noise(rng);
      const double spike_roll = unit(rng);
      const double spike_pos = unit(rng);
      double v = truth + scenario.noise.adc_noise_std * gaussian;
      if (spike_roll < scenario.noise.spike_probability) {
        const double lo = std::max(0.0, truth - scenario.noise.spike_magnitude);
        const double hi = std::min(4095.0, truth + scenario.noise.spike_magnitude);
        v = lo + spike_pos * (hi - lo);
      }
      counts[i] = static_cast<std::uint16_t>(std::clamp(std::round(v), 0.0, 4095.0));
    }
    const auto frame = wire::encode_frame(counts);
    chunks.push_back(TimedChunk{sampled + latency, {frame.begin(), frame.end()}});
  }
  return chunks;
}

std::vector<PoseTransmission> run_pose_streamer(const Scenario& scenario) {
  auto rng = device_rng(scenario.seed, Device::Pose);
  std::uniform_real_distribution<double> delay_ms(scenario.jitter.delay_min_ms,
                                                  scenario.jitter.delay_max_ms);
  const std::int64_t n = tick_count(scenario.duration_s, scenario.pose_rate_hz);
  std::vector<PoseTransmission> out;
  out.reserve(static_cast<std::size_t>(n));
  Timestamp last_arrival{-1};

  for (std::int64_t k = 0; k < n; ++k) {
    const Timestamp device_t = tick_time(k, scenario.pose_rate_hz);
    const double host_s = pose_device_to_host_seconds(scenario, device_t);
    const double d = scenario.jitter.delay_max_ms > scenario.jitter.delay_min_ms
                         ? delay_ms(rng)
                         : scenario.jitter.delay_min_ms;
    Timestamp arrival = from_seconds(host_s + d * 1e-3);
    arrival = std::max(arrival, last_arrival + Timestamp{1});
    last_arrival = arrival;
    const wire::PoseWireRecord record{device_t, scenario.trajectory.phone_pose_at(host_s)};
    out.push_back(PoseTransmission{arrival, wire::encode_pose_record(record)});
  }
  return out;
}

Series<std::int64_t> run_camera_clock(const Scenario& scenario) {
  const std::int64_t n = tick_count(scenario.duration_s, scenario.camera_rate_hz);
  Series<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) {
    out.push_back(device_to_host(tick_time(k, scenario.camera_rate_hz), scenario.skew.camera_ppm), k);
  }
  return out;
}

Series<RigidTransform> truth_phone_poses(const Scenario& scenario,
                                         std::span<const Timestamp> device_times) {
  Series<RigidTransform> out;
  out.reserve(device_times.size());
  for (Timestamp t : device_times) {
    out.push_back(t, scenario.trajectory.phone_pose_at(pose_device_to_host_seconds(scenario, t)));
  }
  return out;
}

ReplayLog run_robot_sink(std::span<const TimedCommand> commands) {
  ReplayLog log;
  log.reserve(commands.size());
  for (const TimedCommand& c : commands) {
    if (!log.empty() && c.t <= log.back().t) {
      throw std::invalid_argument("robot sink: command timestamps must be strictly increasing");
    }
    log.push_back(c.t, c.command);
  }
  return log;
}

}  // namespace whed::sim
