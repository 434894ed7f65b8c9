#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>

namespace whed {

/// Nanoseconds relative to session start. Streams never carry wall-clock time.
using Timestamp = std::chrono::nanoseconds;

using namespace std::chrono_literals;

inline Timestamp from_seconds(double seconds) {
  return Timestamp{static_cast<std::int64_t>(std::llround(seconds * 1e9))};
}

inline constexpr double to_seconds(Timestamp t) {
  return static_cast<double>(t.count()) * 1e-9;
}

/// Tick k of a fixed-rate clock, floored to whole nanoseconds. Integral
/// rates use exact integer arithmetic, so tick 2k at 60 Hz equals tick k at
/// 30 Hz.
inline Timestamp tick_time(std::int64_t k, double rate_hz) {
  const double whole = std::round(rate_hz);
  if (whole == rate_hz && whole >= 1.0) {
    return Timestamp{k * 1'000'000'000LL / static_cast<std::int64_t>(whole)};
  }
  return Timestamp{static_cast<std::int64_t>(
      std::floor(static_cast<long double>(k) * 1e9L / static_cast<long double>(rate_hz)))};
}

/// Converts a device-clock reading to host time for a clock running fast by
/// `skew_ppm` parts per million.
inline Timestamp device_to_host(Timestamp device, double skew_ppm) {
  if (skew_ppm == 0.0) return device;
  return Timestamp{static_cast<std::int64_t>(
      std::llround(static_cast<double>(device.count()) / (1.0 + skew_ppm * 1e-6)))};
}

}  // namespace whed
