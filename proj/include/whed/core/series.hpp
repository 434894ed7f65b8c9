#pragma once

#include "whed/core/time.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace whed {

/// Time series with strictly increasing timestamps.
template <class T>
class Series {
 public:
  struct Sample {
    Timestamp t;
    T value;
  };

  using value_type = Sample;
  using const_iterator = typename std::vector<Sample>::const_iterator;

  Series() = default;

  /// Throws std::invalid_argument if t does not strictly follow the last sample.
  void push_back(Timestamp t, T value) {
    if (!samples_.empty() && t <= samples_.back().t) {
      throw std::invalid_argument("series timestamps must be strictly increasing (got " +
                                  std::to_string(t.count()) + " ns after " +
                                  std::to_string(samples_.back().t.count()) + " ns)");
    }
    samples_.push_back(Sample{t, std::move(value)});
  }

  void reserve(std::size_t n) { samples_.reserve(n); }

  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  const Sample& front() const { return samples_.front(); }
  const Sample& back() const { return samples_.back(); }
  const_iterator begin() const { return samples_.begin(); }
  const_iterator end() const { return samples_.end(); }

  /// Index of the sample closest in time to t; ties go to the earlier sample.
  std::optional<std::size_t> nearest_index(Timestamp t) const {
    if (samples_.empty()) return std::nullopt;
    auto it = std::lower_bound(samples_.begin(), samples_.end(), t,
                               [](const Sample& s, Timestamp v) { return s.t < v; });
    if (it == samples_.end()) return samples_.size() - 1;
    const auto after = static_cast<std::size_t>(it - samples_.begin());
    if (after == 0) return 0;
    const auto before = after - 1;
    return (t - samples_[before].t) <= (samples_[after].t - t) ? before : after;
  }

  /// Applies f to every value, keeping timestamps.
  template <class F>
  auto map(F&& f) const -> Series<decltype(f(std::declval<const T&>()))> {
    Series<decltype(f(std::declval<const T&>()))> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) out.push_back(s.t, f(s.value));
    return out;
  }

 private:
  std::vector<Sample> samples_;
};

}  // namespace whed
