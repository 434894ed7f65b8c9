#pragma once

#include "whed/core/rigid_transform.hpp"
#include "whed/core/time.hpp"
#include "whed/wire/pose_record.hpp"

#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <vector>

namespace whed::acquire {

struct PoseSample {
  Timestamp t{};
  RigidTransform pose;
};

struct ResamplerOptions {
  double output_rate_hz = 60.0;
  std::size_t capacity = 256;
  /// How long after a tick (in host time, offset-corrected) it is resolved,
  /// so that the record after the tick has normally arrived.
  Timestamp emit_delay = std::chrono::milliseconds(50);
};

struct ResamplerStats {
  std::uint64_t received = 0;
  std::uint64_t dropped_overflow = 0;
  std::uint64_t dropped_out_of_order = 0;
  std::uint64_t emitted = 0;
  std::uint64_t interpolated = 0;
  std::uint64_t held = 0;  ///< zero-order-hold emissions
  std::uint64_t gaps = 0;  ///< ticks with an empty buffer
};

/// Network-rate pose ring decoupled from a fixed-rate output clock.
///
/// Output ticks are k / output_rate_hz of the pose device clock, exactly.
/// A tick is resolved by linear (position) and spherical (orientation)
/// interpolation between the records that bracket it; with no record after
/// the tick it holds the latest record. The receiver side only appends under
/// a short lock and never waits on the consumer.
class DualRateBuffer {
 public:
  explicit DualRateBuffer(ResamplerOptions options = {});

  /// Receiver side. Records whose device time does not advance are dropped;
  /// when full, the oldest record is dropped.
  void push(const wire::PoseWireRecord& record, Timestamp receipt);

  /// Resolves the next tick if it is due at host time `now`. Returns nothing
  /// when no tick is due, or when the due tick found the buffer empty (gap).
  std::optional<PoseSample> resample_60hz(Timestamp now);

  /// Every tick due at `now`, in order.
  std::vector<PoseSample> drain(Timestamp now);

  /// After collection stops: every remaining tick up to the newest record.
  std::vector<PoseSample> flush();

  /// Median of (receipt - record time) over the records currently buffered.
  Timestamp clock_offset_estimate() const;

  ResamplerStats stats() const;
  std::size_t size() const;

 private:
  struct Entry {
    wire::PoseWireRecord record;
    Timestamp receipt;
  };

  Timestamp offset_locked() const;
  bool due_locked(Timestamp now, Timestamp offset) const;
  std::optional<PoseSample> resolve_locked(Timestamp tick);

  ResamplerOptions options_;
  mutable std::mutex mutex_;
  std::deque<Entry> ring_;
  std::int64_t next_tick_ = 0;
  ResamplerStats stats_;
};

}  // namespace whed::acquire
