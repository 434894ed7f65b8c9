#pragma once

#include "whed/core/series.hpp"
#include "whed/core/types.hpp"
#include "whed/sim/scenario.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace whed::sim {

/// Bytes arriving at the host at `host_time`.
struct TimedChunk {
  Timestamp host_time{};
  std::vector<std::uint8_t> bytes;
};

struct PoseTransmission {
  Timestamp send_time{};  ///< host-side arrival time of the line
  std::string line;       ///< newline-terminated wire record
};

/// One frame per millisecond of device time, each delivered as its own chunk.
std::vector<TimedChunk> run_encoder_device(const Scenario& scenario);

/// Noise-free ADC counts the encoder device would report at host time t.
AdcChannels ideal_counts(const Scenario& scenario, double t_seconds);

/// Records every 1/pose_rate_hz of device time; record timestamps are the
/// skewed device clock, arrival times add the per-record network delay.
/// Arrival order is preserved, as on a stream transport.
std::vector<PoseTransmission> run_pose_streamer(const Scenario& scenario);

/// Frame indices stamped with host receipt time, one per camera period.
Series<std::int64_t> run_camera_clock(const Scenario& scenario);

/// Ground-truth phone poses at the given pose-device timestamps.
Series<RigidTransform> truth_phone_poses(const Scenario& scenario,
                                         std::span<const Timestamp> device_times);

struct RobotCommand {
  MotorCommands commands{};
  RigidTransform pose;
};

struct TimedCommand {
  Timestamp t{};
  RobotCommand command;
};

/// What the simulated robot executed.
using ReplayLog = Series<RobotCommand>;

/// Ideal executor: every command is executed verbatim. Throws
/// std::invalid_argument on non-increasing timestamps.
ReplayLog run_robot_sink(std::span<const TimedCommand> commands);

}  // namespace whed::sim
