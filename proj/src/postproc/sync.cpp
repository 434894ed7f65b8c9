#include "whed/postproc/sync.hpp"

#include "whed/core/error.hpp"

#include <fstream>

namespace whed::postproc {

namespace {

template <class T>
std::optional<std::size_t> gated_match(const Series<T>& series, Timestamp t, Timestamp gate,
                                       Timestamp& offset) {
  const auto idx = series.nearest_index(t);
  if (!idx) return std::nullopt;
  const Timestamp d = series[*idx].t > t ? series[*idx].t - t : t - series[*idx].t;
  if (d > gate) return std::nullopt;
  offset = d;
  return idx;
}

}  // namespace

SyncResult synchronize(const Series<std::int64_t>& video, const Series<ChannelValues>& encoders,
                       const Series<RigidTransform>& poses, const SyncOptions& options) {
  SyncResult out;
  SyncReport& r = out.report;
  r.video_ticks = video.size();
  if (!video.empty()) {
    if (encoders.empty()) r.warnings.emplace_back("encoder stream is empty; every tick dropped");
    if (poses.empty()) r.warnings.emplace_back("pose stream is empty; every tick dropped");
  }
  out.records.reserve(video.size());

  for (const auto& tick : video) {
    Timestamp enc_off{};
    Timestamp pose_off{};
    const auto e = gated_match(encoders, tick.t, options.max_offset, enc_off);
    const auto p = gated_match(poses, tick.t, options.max_offset, pose_off);
    if (!e) ++r.dropped_encoder_gate;
    if (!p) ++r.dropped_pose_gate;
    if (!e || !p) {
      ++r.dropped;
      continue;
    }
    r.max_encoder_offset = std::max(r.max_encoder_offset, enc_off);
    r.max_pose_offset = std::max(r.max_pose_offset, pose_off);
    out.records.push_back(SyncedRecord{tick.t, tick.value, encoders[*e].value, poses[*p].value});
  }
  r.matched = out.records.size();
  return out;
}

void write_sync_report(const std::filesystem::path& path, const SyncReport& report, bool filtered) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "video_ticks = " << report.video_ticks << '\n'
      << "matched = " << report.matched << '\n'
      << "dropped = " << report.dropped << '\n'
      << "dropped_encoder_gate = " << report.dropped_encoder_gate << '\n'
      << "dropped_pose_gate = " << report.dropped_pose_gate << '\n'
      << "max_encoder_offset_ns = " << report.max_encoder_offset.count() << '\n'
      << "max_pose_offset_ns = " << report.max_pose_offset.count() << '\n'
      << "warnings = " << report.warnings.size() << '\n'
      << "filtered = " << (filtered ? "true" : "false") << '\n';
  for (const auto& w : report.warnings) out << "# warning: " << w << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace whed::postproc
