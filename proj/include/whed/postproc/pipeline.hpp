#pragma once

#include "whed/acquire/session.hpp"
#include "whed/postproc/filters.hpp"
#include "whed/postproc/sync.hpp"

#include <filesystem>

namespace whed::postproc {

struct ProcessOptions {
  bool filter = true;
  SyncOptions sync;
  FilterChain chain;
  double encoder_rate_hz = kEncoderRateHz;
  double pose_rate_hz = kPoseRateHz;
};

struct ProcessResult {
  SyncResult synced;    ///< raw streams
  SyncResult filtered;  ///< filtered streams; equals `synced` when filtering is off
  bool was_filtered = false;
};

/// Filters each stream at its own rate (unless disabled), then aligns both
/// the raw and the filtered streams to the video clock.
ProcessResult process_session(const acquire::SessionBuffers& session,
                              const ProcessOptions& options = {});

/// synced.csv, filtered.csv and sync_report.txt (report for the filtered pass).
void write_processed(const ProcessResult& result, const std::filesystem::path& directory);

}  // namespace whed::postproc
