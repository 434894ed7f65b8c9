#include "whed/postproc/pipeline.hpp"

#include "whed/core/csv.hpp"

namespace whed::postproc {

ProcessResult process_session(const acquire::SessionBuffers& session, const ProcessOptions& options) {
  const Series<ChannelValues> encoders = session.encoders.map(to_channel_values);
  ProcessResult out;
  out.synced = synchronize(session.video, encoders, session.poses, options.sync);
  if (!options.filter) {
    out.filtered = out.synced;
    return out;
  }
  out.filtered = synchronize(session.video,
                             filter_encoder_series(encoders, options.encoder_rate_hz, options.chain),
                             filter_pose_series(session.poses, options.pose_rate_hz, options.chain),
                             options.sync);
  out.was_filtered = true;
  return out;
}

void write_processed(const ProcessResult& result, const std::filesystem::path& directory) {
  csv::write_synced(directory / "synced.csv", result.synced.records);
  csv::write_synced(directory / "filtered.csv", result.filtered.records);
  write_sync_report(directory / "sync_report.txt", result.filtered.report, result.was_filtered);
}

}  // namespace whed::postproc
