#pragma once

#include "whed/core/rigid_transform.hpp"
#include "whed/core/time.hpp"

#include <array>
#include <cstdint>

namespace whed {

inline constexpr std::size_t kChannelCount = 6;

/// Raw 12-bit ADC counts, one per passive-hand joint encoder.
using AdcChannels = std::array<std::uint16_t, kChannelCount>;

/// Encoder channels after filtering; fractional counts.
using ChannelValues = std::array<double, kChannelCount>;

/// 16-bit hand motor commands.
using MotorCommands = std::array<std::uint16_t, kChannelCount>;

inline ChannelValues to_channel_values(const AdcChannels& raw) {
  ChannelValues out{};
  for (std::size_t i = 0; i < kChannelCount; ++i) out[i] = raw[i];
  return out;
}

/// One master-clock row: a video tick joined with its nearest encoder frame
/// and nearest pose sample.
struct SyncedRecord {
  Timestamp t{};
  std::int64_t frame_idx = 0;
  ChannelValues channels{};
  RigidTransform pose;
};

}  // namespace whed
