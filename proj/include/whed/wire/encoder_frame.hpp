#pragma once

#include "whed/core/error.hpp"
#include "whed/core/time.hpp"
#include "whed/core/types.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace whed::wire {

// MCU -> host frame: AA BB, then six little-endian u16 samples (low-aligned
// 12-bit ADC counts). No checksum.
inline constexpr std::uint8_t kHeader0 = 0xAA;
inline constexpr std::uint8_t kHeader1 = 0xBB;
inline constexpr std::size_t kFrameSize = 14;
inline constexpr std::uint16_t kAdcMax = 4095;

using FrameBytes = std::array<std::uint8_t, kFrameSize>;

struct EncoderFrame {
  AdcChannels channels{};
  Timestamp rx_timestamp{};  ///< host receipt time; not on the wire
};

class EncodeError : public Error {
 public:
  using Error::Error;
};

/// Throws EncodeError if any channel exceeds the 12-bit range.
FrameBytes encode_frame(const AdcChannels& channels);

/// Incremental frame decoder. Holds the trailing partial frame between calls
/// and resynchronizes on the next AA BB pair after garbage.
///
/// A candidate frame with any channel above 4095 is rejected and scanning
/// resumes one byte later, so a false sync never swallows a real header that
/// follows it. Each contiguous desynchronized episode (skipped bytes and/or
/// rejected candidates) counts once toward corrupt_frames().
class FrameDecoder {
 public:
  struct Stats {
    std::uint64_t frames = 0;
    std::uint64_t rejected_candidates = 0;  ///< header-aligned, channel out of range
    std::uint64_t skipped_bytes = 0;
    std::uint64_t desync_episodes = 0;
  };

  std::vector<AdcChannels> feed(std::span<const std::uint8_t> bytes);

  /// Corrupt-frame counter: desynchronized episodes seen so far.
  std::uint64_t corrupt_frames() const { return stats_.desync_episodes; }
  const Stats& stats() const { return stats_; }
  std::size_t pending_bytes() const { return pending_.size(); }

 private:
  void mark_desync();

  std::vector<std::uint8_t> pending_;
  bool in_desync_ = false;
  Stats stats_;
};

}  // namespace whed::wire
