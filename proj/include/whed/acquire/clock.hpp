#pragma once

#include "whed/core/time.hpp"

#include <atomic>
#include <chrono>
#include <mutex>

namespace whed::acquire {

/// Monotonic session-relative clock.
class SessionClock {
 public:
  virtual ~SessionClock() = default;
  virtual Timestamp now() const = 0;
};

/// Host performance counter, zeroed at construction.
class SteadySessionClock final : public SessionClock {
 public:
  SteadySessionClock() : start_(std::chrono::steady_clock::now()) {}
  Timestamp now() const override {
    return std::chrono::duration_cast<Timestamp>(std::chrono::steady_clock::now() - start_);
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Clock driven explicitly by a simulation loop.
class ManualClock final : public SessionClock {
 public:
  Timestamp now() const override { return Timestamp{now_.load(std::memory_order_acquire)}; }
  void set(Timestamp t) { now_.store(t.count(), std::memory_order_release); }

 private:
  std::atomic<std::int64_t> now_{0};
};

template <class T>
struct Stamped {
  Timestamp t;
  T item;
};

/// Attaches receipt times. Successive stamps are strictly increasing even when
/// the clock has not advanced between two receipts.
class ReceiptStamper {
 public:
  explicit ReceiptStamper(const SessionClock& clock) : clock_(&clock) {}

  Timestamp stamp() {
    std::lock_guard lock(mutex_);
    Timestamp t = clock_->now();
    if (has_last_ && t <= last_) t = last_ + Timestamp{1};
    last_ = t;
    has_last_ = true;
    return t;
  }

  template <class T>
  Stamped<T> stamp(T item) {
    return Stamped<T>{stamp(), std::move(item)};
  }

 private:
  const SessionClock* clock_;
  std::mutex mutex_;
  Timestamp last_{};
  bool has_last_ = false;
};

}  // namespace whed::acquire
