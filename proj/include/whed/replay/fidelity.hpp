#pragma once

#include "whed/core/series.hpp"
#include "whed/core/types.hpp"
#include "whed/sim/devices.hpp"

#include <array>
#include <filesystem>
#include <vector>

namespace whed::replay {

struct FidelityOptions {
  /// Replay samples without a demonstration sample this close are skipped.
  Timestamp max_offset = std::chrono::milliseconds(70);
};

struct FidelityReport {
  std::size_t matched = 0;
  std::size_t unmatched = 0;
  double position_rmse = 0.0;        ///< m
  double position_max = 0.0;         ///< m
  double orientation_mean = 0.0;     ///< rad, geodesic
  double orientation_max = 0.0;      ///< rad
  std::array<double, kChannelCount> command_rmse{};  ///< counts; zero without reference commands
};

struct ErrorSample {
  Timestamp t{};
  double position = 0.0;
  double angle = 0.0;
};

struct Comparison {
  FidelityReport report;
  std::vector<ErrorSample> errors;  ///< one per matched replay sample
};

/// Pairs every replay sample with the nearest demonstration sample and
/// measures position and geodesic orientation error. When reference commands
/// are given, per-channel command RMSE is computed the same way. Throws
/// DataError when nothing matches.
Comparison compare_trajectories(const Series<RigidTransform>& demo, const sim::ReplayLog& replay,
                                const Series<MotorCommands>* reference_commands = nullptr,
                                const FidelityOptions& options = {});

void write_fidelity_report(const std::filesystem::path& path, const FidelityReport& report);
/// CSV `t_ns,pos_err,ang_err`.
void write_errors_csv(const std::filesystem::path& path, const std::vector<ErrorSample>& errors);

}  // namespace whed::replay
