#include "whed/wire/encoder_frame.hpp"

#include <string>

namespace whed::wire {

FrameBytes encode_frame(const AdcChannels& channels) {
  FrameBytes out{};
  out[0] = kHeader0;
  out[1] = kHeader1;
  for (std::size_t i = 0; i < kChannelCount; ++i) {
    const std::uint16_t v = channels[i];
    if (v > kAdcMax) {
      throw EncodeError("channel " + std::to_string(i) + " value " + std::to_string(v) +
                        " exceeds 12-bit ADC range");
    }
    out[2 + 2 * i] = static_cast<std::uint8_t>(v & 0xFF);
    out[3 + 2 * i] = static_cast<std::uint8_t>(v >> 8);
  }
  return out;
}

void FrameDecoder::mark_desync() {
  if (!in_desync_) {
    ++stats_.desync_episodes;
    in_desync_ = true;
  }
}

std::vector<AdcChannels> FrameDecoder::feed(std::span<const std::uint8_t> bytes) {
  pending_.insert(pending_.end(), bytes.begin(), bytes.end());
  std::vector<AdcChannels> frames;
  std::size_t pos = 0;
  const std::size_t n = pending_.size();

  while (n - pos >= 2) {
    if (pending_[pos] != kHeader0 || pending_[pos + 1] != kHeader1) {
      ++stats_.skipped_bytes;
      mark_desync();
      ++pos;
      continue;
    }
    if (n - pos < kFrameSize) break;

    AdcChannels ch{};
    bool valid = true;
    for (std::size_t i = 0; i < kChannelCount; ++i) {
      const auto lo = pending_[pos + 2 + 2 * i];
      const auto hi = pending_[pos + 3 + 2 * i];
      ch[i] = static_cast<std::uint16_t>(lo | (hi << 8));
      valid = valid && ch[i] <= kAdcMax;
    }
    if (!valid) {
      ++stats_.rejected_candidates;
      mark_desync();
      ++pos;
      continue;
    }
    frames.push_back(ch);
    ++stats_.frames;
    in_desync_ = false;
    pos += kFrameSize;
  }

  pending_.erase(pending_.begin(), pending_.begin() + static_cast<std::ptrdiff_t>(pos));
  return frames;
}

}  // namespace whed::wire
