#pragma once

#include "whed/acquire/dual_rate_buffer.hpp"
#include "whed/acquire/session.hpp"
#include "whed/sim/scenario.hpp"
#include "whed/wire/encoder_frame.hpp"

namespace whed::acquire {

struct CollectionStats {
  wire::FrameDecoder::Stats decoder;
  ResamplerStats resampler;
  std::uint64_t pose_records = 0;
  std::uint64_t pose_records_rejected = 0;
  /// Session median of (receipt - record time) for the pose stream.
  Timestamp pose_clock_offset{};
};

struct CollectedSession {
  SessionBuffers buffers;
  SessionMeta meta;
  CollectionStats stats;
};

/// Runs the three simulated devices concurrently, then replays their output
/// through the host acquisition path (decode, stamp on receipt, dual-rate
/// resampling) on a simulated host clock.
CollectedSession collect_simulated_session(const sim::Scenario& scenario,
                                           const ResamplerOptions& options = {});

}  // namespace whed::acquire
