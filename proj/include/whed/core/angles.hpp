#pragma once

#include <numbers>

namespace whed {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Maps an angle onto its representative in [-pi, pi).
/// Inputs already inside the interval are returned unchanged, so the map is
/// exactly idempotent. Throws std::domain_error for NaN or infinite input.
double wrap_angle(double radians);

}  // namespace whed
