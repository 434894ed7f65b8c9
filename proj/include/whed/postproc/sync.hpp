#pragma once

#include "whed/core/series.hpp"
#include "whed/core/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace whed::postproc {

struct SyncOptions {
  /// Matches farther than this from the video tick are discarded.
  Timestamp max_offset = std::chrono::milliseconds(70);
};

struct SyncReport {
  std::size_t video_ticks = 0;
  std::size_t matched = 0;
  std::size_t dropped = 0;
  std::size_t dropped_encoder_gate = 0;  ///< nearest encoder frame beyond the gate (or none)
  std::size_t dropped_pose_gate = 0;     ///< nearest pose sample beyond the gate (or none)
  Timestamp max_encoder_offset{};        ///< over emitted matches
  Timestamp max_pose_offset{};
  std::vector<std::string> warnings;
};

struct SyncResult {
  std::vector<SyncedRecord> records;
  SyncReport report;
};

/// Joins every video tick with its nearest encoder frame and nearest pose
/// sample (exact ties go to the earlier sample). A tick is dropped when either
/// match is more than max_offset away. Empty encoder or pose streams drop every
/// tick and add a warning.
SyncResult synchronize(const Series<std::int64_t>& video, const Series<ChannelValues>& encoders,
                       const Series<RigidTransform>& poses, const SyncOptions& options = {});

/// key = value summary; `filtered` records whether filtered.csv was filtered.
void write_sync_report(const std::filesystem::path& path, const SyncReport& report, bool filtered);

}  // namespace whed::postproc
