#include "whed/acquire/dual_rate_buffer.hpp"

#include <algorithm>
#include <stdexcept>

namespace whed::acquire {

DualRateBuffer::DualRateBuffer(ResamplerOptions options) : options_(options) {
  if (!(options_.output_rate_hz > 0.0)) throw std::invalid_argument("output rate must be > 0");
  if (options_.capacity < 2) throw std::invalid_argument("buffer capacity must be >= 2");
}

void DualRateBuffer::push(const wire::PoseWireRecord& record, Timestamp receipt) {
  std::lock_guard lock(mutex_);
  ++stats_.received;
  if (!ring_.empty() && record.t <= ring_.back().record.t) {
    ++stats_.dropped_out_of_order;
    return;
  }
  if (ring_.size() == options_.capacity) {
    ring_.pop_front();
    ++stats_.dropped_overflow;
  }
  ring_.push_back(Entry{record, receipt});
}

Timestamp DualRateBuffer::offset_locked() const {
  if (ring_.empty()) return Timestamp{0};
  std::vector<std::int64_t> d;
  d.reserve(ring_.size());
  for (const Entry& e : ring_) d.push_back((e.receipt - e.record.t).count());
  const auto mid = d.begin() + static_cast<std::ptrdiff_t>((d.size() - 1) / 2);
  std::nth_element(d.begin(), mid, d.end());
  return Timestamp{*mid};
}

Timestamp DualRateBuffer::clock_offset_estimate() const {
  std::lock_guard lock(mutex_);
  return offset_locked();
}

bool DualRateBuffer::due_locked(Timestamp now, Timestamp offset) const {
  return tick_time(next_tick_, options_.output_rate_hz) + offset + options_.emit_delay <= now;
}

std::optional<PoseSample> DualRateBuffer::resolve_locked(Timestamp tick) {
  if (ring_.empty()) {
    ++stats_.gaps;
    return std::nullopt;
  }
  const auto after = std::upper_bound(ring_.begin(), ring_.end(), tick,
                                      [](Timestamp t, const Entry& e) { return t < e.record.t; });
  ++stats_.emitted;
  if (after == ring_.begin()) {
    ++stats_.held;
    return PoseSample{tick, ring_.front().record.pose};
  }
  const Entry& a = *std::prev(after);
  if (a.record.t == tick) {
    ++stats_.interpolated;
    return PoseSample{tick, a.record.pose};
  }
  if (after == ring_.end()) {
    ++stats_.held;
    return PoseSample{tick, a.record.pose};
  }
  const Entry& b = *after;
  const double f = static_cast<double>((tick - a.record.t).count()) /
                   static_cast<double>((b.record.t - a.record.t).count());
  const Vec3& pa = a.record.pose.translation();
  const Vec3 p = pa + f * (b.record.pose.translation() - pa);
  const Quaternion q = slerp(a.record.pose.rotation(), b.record.pose.rotation(), f);
  ++stats_.interpolated;
  return PoseSample{tick, RigidTransform(q, p)};
}

std::optional<PoseSample> DualRateBuffer::resample_60hz(Timestamp now) {
  std::lock_guard lock(mutex_);
  if (!due_locked(now, offset_locked())) return std::nullopt;
  return resolve_locked(tick_time(next_tick_++, options_.output_rate_hz));
}

std::vector<PoseSample> DualRateBuffer::drain(Timestamp now) {
  std::lock_guard lock(mutex_);
  std::vector<PoseSample> out;
  const Timestamp offset = offset_locked();
  while (due_locked(now, offset)) {
    if (auto s = resolve_locked(tick_time(next_tick_++, options_.output_rate_hz))) {
      out.push_back(*s);
    }
  }
  return out;
}

std::vector<PoseSample> DualRateBuffer::flush() {
  std::lock_guard lock(mutex_);
  std::vector<PoseSample> out;
  if (ring_.empty()) return out;
  const Timestamp last = ring_.back().record.t;
  while (tick_time(next_tick_, options_.output_rate_hz) <= last) {
    if (auto s = resolve_locked(tick_time(next_tick_++, options_.output_rate_hz))) {
      out.push_back(*s);
    }
  }
  return out;
}

ResamplerStats DualRateBuffer::stats() const {
  std::lock_guard lock(mutex_);
  return stats_;
}

std::size_t DualRateBuffer::size() const {
  std::lock_guard lock(mutex_);
  return ring_.size();
}

}  // namespace whed::acquire
