#pragma once

#include "whed/core/error.hpp"
#include "whed/core/types.hpp"

#include <cstdint>
#include <filesystem>
#include <map>

namespace whed::replay {

/// Raw ADC readings of the fully open and fully closed postures, plus a
/// hand-tuned gain.
struct ChannelCalibration {
  int open_raw = 0;
  int closed_raw = 4095;
  double gain = 1.0;

  /// Throws DataError: raw values outside [0, 4095], open == closed, gain <= 0.
  void validate() const;
};

inline constexpr std::uint16_t kMotorMax = 65535;

/// Linear interpolation from the open (0) to the closed (65535) reading,
/// scaled by the gain, rounded half away from zero and clamped to 16 bits.
std::uint16_t map_to_motor(double raw, const ChannelCalibration& cal);

/// Channel index -> calibration.
using CalibrationTable = std::map<int, ChannelCalibration>;

/// Throws DataError naming the first channel without a calibration.
MotorCommands map_channels(const ChannelValues& raw, const CalibrationTable& table);

/// CSV `channel,open_raw,closed_raw,gain`.
CalibrationTable read_calibration(const std::filesystem::path& path);
void write_calibration(const std::filesystem::path& path, const CalibrationTable& table);

}  // namespace whed::replay
