#include "whed/replay/calibration.hpp"

#include "whed/core/csv.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace whed::replay {

void ChannelCalibration::validate() const {
  if (open_raw < 0 || open_raw > 4095 || closed_raw < 0 || closed_raw > 4095) {
    throw DataError(fmt::format("calibration raw values must lie in [0, 4095] (open {}, closed {})",
                                open_raw, closed_raw));
  }
  if (open_raw == closed_raw) {
    throw DataError(fmt::format("calibration open and closed readings are equal ({})", open_raw));
  }
  if (!(gain > 0.0) || !std::isfinite(gain)) {
    throw DataError(fmt::format("calibration gain must be > 0 (got {})", gain));
  }
}

std::uint16_t map_to_motor(double raw, const ChannelCalibration& cal) {
  const double t = (raw - cal.open_raw) / static_cast<double>(cal.closed_raw - cal.open_raw);
  const double v = std::round(cal.gain * t * kMotorMax);
  return static_cast<std::uint16_t>(std::clamp(v, 0.0, static_cast<double>(kMotorMax)));
}

MotorCommands map_channels(const ChannelValues& raw, const CalibrationTable& table) {
  MotorCommands out{};
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    const auto it = table.find(static_cast<int>(c));
    if (it == table.end()) throw DataError(fmt::format("no calibration for channel {}", c));
    out[c] = map_to_motor(raw[c], it->second);
  }
  return out;
}

CalibrationTable read_calibration(const std::filesystem::path& path) {
  CalibrationTable table;
  for (const auto& row : csv::read(path, *csv::find_schema("calibration"))) {
    const auto channel = row.integer(0);
    if (channel < 0 || channel >= static_cast<std::int64_t>(kChannelCount)) {
      throw SchemaError(path.string(), row.line, 1,
                        fmt::format("channel must be in [0, {}], got {}", kChannelCount - 1, channel));
    }
    ChannelCalibration cal{static_cast<int>(std::clamp<std::int64_t>(row.integer(1), -1, 4096)),
                           static_cast<int>(std::clamp<std::int64_t>(row.integer(2), -1, 4096)),
                           row.real(3)};
    try {
      cal.validate();
    } catch (const DataError& e) {
      throw SchemaError(path.string(), row.line, 0, e.what());
    }
    if (!table.emplace(static_cast<int>(channel), cal).second) {
      throw SchemaError(path.string(), row.line, 1, fmt::format("duplicate channel {}", channel));
    }
  }
  return table;
}

void write_calibration(const std::filesystem::path& path, const CalibrationTable& table) {
  csv::Writer w(path, *csv::find_schema("calibration"));
  for (const auto& [channel, cal] : table) {
    const std::string fields[] = {std::to_string(channel), std::to_string(cal.open_raw),
                                  std::to_string(cal.closed_raw), csv::format_real(cal.gain)};
    w.write_row(fields);
  }
  w.close();
}

}  // namespace whed::replay
