#include "whed/postproc/filters.hpp"

#include "whed/core/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace whed::postproc {

namespace {

constexpr double kPeriodTolerance = 0.01;
constexpr double kMinQuaternionNorm = 1e-6;

void check_uniform(const std::vector<Timestamp>& t, double fs) {
  const double period_ns = 1e9 / fs;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double dt = static_cast<double>((t[i] - t[i - 1]).count());
    if (std::abs(dt - period_ns) > kPeriodTolerance * period_ns) {
      throw DataError(fmt::format(
          "non-uniform sampling at sample {}: interval {} ns, expected {:.0f} ns at {} Hz", i, dt,
          period_ns, fs));
    }
  }
}

std::vector<Timestamp> times_of(const auto& series) {
  std::vector<Timestamp> t;
  t.reserve(series.size());
  for (const auto& s : series) t.push_back(s.t);
  return t;
}

template <class Values>
double window_mean(const Values& v, std::size_t i, std::size_t window) {
  const std::size_t first = i + 1 >= window ? i + 1 - window : 0;
  double sum = 0.0;
  for (std::size_t j = first; j <= i; ++j) sum += v[j];
  return sum / static_cast<double>(i + 1 - first);
}

/// Filters parallel component columns sharing one time base.
std::vector<std::vector<double>> filter_columns(std::vector<std::vector<double>> columns,
                                                const std::vector<Timestamp>& t, double fs,
                                                const FilterChain& chain) {
  if (t.empty()) return columns;
  check_uniform(t, fs);
  if (chain.window == 0) throw std::invalid_argument("moving-average window must be >= 1");
  const Biquad design = design_butterworth2(fs, chain.cutoff_hz);
  for (auto& col : columns) {
    Biquad bq = design;
    bq.reset_to(col.front());
    for (double& v : col) v = bq.step(v);
    std::vector<double> smoothed(col.size());
    for (std::size_t i = 0; i < col.size(); ++i) smoothed[i] = window_mean(col, i, chain.window);
    col = std::move(smoothed);
  }
  return columns;
}

}  // namespace

Series<double> filter_series(const Series<double>& series, const Biquad& biquad) {
  Series<double> out;
  if (series.empty()) return out;
  check_uniform(times_of(series), biquad.sample_rate());
  Biquad bq = biquad;
  bq.reset_to(series.front().value);
  out.reserve(series.size());
  for (const auto& s : series) out.push_back(s.t, bq.step(s.value));
  return out;
}

Series<double> moving_average(const Series<double>& series, std::size_t window) {
  if (window == 0) throw std::invalid_argument("moving-average window must be >= 1");
  Series<double> out;
  out.reserve(series.size());
  std::vector<double> values;
  values.reserve(series.size());
  for (const auto& s : series) values.push_back(s.value);
  for (std::size_t i = 0; i < series.size(); ++i) {
    out.push_back(series[i].t, window_mean(values, i, window));
  }
  return out;
}

Series<double> filter_two_stage(const Series<double>& series, double fs, const FilterChain& chain) {
  return moving_average(filter_series(series, design_butterworth2(fs, chain.cutoff_hz)), chain.window);
}

Series<ChannelValues> filter_encoder_series(const Series<ChannelValues>& encoders, double fs,
                                            const FilterChain& chain) {
  const auto t = times_of(encoders);
  std::vector<std::vector<double>> cols(kChannelCount, std::vector<double>(encoders.size()));
  for (std::size_t i = 0; i < encoders.size(); ++i) {
    for (std::size_t c = 0; c < kChannelCount; ++c) cols[c][i] = encoders[i].value[c];
  }
  cols = filter_columns(std::move(cols), t, fs, chain);
  Series<ChannelValues> out;
  out.reserve(encoders.size());
  for (std::size_t i = 0; i < encoders.size(); ++i) {
    ChannelValues v{};
    for (std::size_t c = 0; c < kChannelCount; ++c) v[c] = cols[c][i];
    out.push_back(t[i], v);
  }
  return out;
}

Series<RigidTransform> filter_pose_series(const Series<RigidTransform>& poses, double fs,
                                          const FilterChain& chain) {
  const auto t = times_of(poses);
  std::vector<std::vector<double>> cols(7, std::vector<double>(poses.size()));
  Eigen::Vector4d prev = Eigen::Vector4d::Zero();
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const RigidTransform& p = poses[i].value;
    Eigen::Vector4d q = p.rotation().coeffs();
    if (i > 0 && q.dot(prev) < 0.0) q = -q;
    prev = q;
    for (int k = 0; k < 3; ++k) cols[k][i] = p.translation()[k];
    for (int k = 0; k < 4; ++k) cols[3 + k][i] = q[k];
  }
  cols = filter_columns(std::move(cols), t, fs, chain);
  Series<RigidTransform> out;
  out.reserve(poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const Eigen::Vector4d q(cols[3][i], cols[4][i], cols[5][i], cols[6][i]);
    if (!(q.norm() >= kMinQuaternionNorm)) {
      throw NumericalError(fmt::format(
          "filtered orientation at sample {} (t = {} ns) has norm {:.3g}; cannot renormalize", i,
          t[i].count(), q.norm()));
    }
    out.push_back(t[i], RigidTransform(Quaternion(q[0], q[1], q[2], q[3]),
                                       Vec3(cols[0][i], cols[1][i], cols[2][i])));
  }
  return out;
}

}  // namespace whed::postproc
