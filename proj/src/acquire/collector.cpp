#include "whed/acquire/collector.hpp"

#include "whed/acquire/clock.hpp"
#include "whed/sim/devices.hpp"
#include "whed/wire/pose_record.hpp"

#include <algorithm>
#include <future>
#include <tuple>

namespace whed::acquire {

namespace {

enum class Source : int { Encoder = 0, Pose = 1, Camera = 2, Tick = 3 };

struct Event {
  Timestamp t;
  Source source;
  std::size_t index;

  friend bool operator<(const Event& a, const Event& b) {
    return std::tie(a.t, a.source, a.index) < std::tie(b.t, b.source, b.index);
  }
};

}  // namespace

CollectedSession collect_simulated_session(const sim::Scenario& scenario,
                                           const ResamplerOptions& options) {
  scenario.validate();

  // Device producers are independent; run them concurrently.
  auto encoder_job = std::async(std::launch::async, [&] { return sim::run_encoder_device(scenario); });
  auto pose_job = std::async(std::launch::async, [&] { return sim::run_pose_streamer(scenario); });
  auto camera_job = std::async(std::launch::async, [&] { return sim::run_camera_clock(scenario); });
  const auto encoder_chunks = encoder_job.get();
  const auto pose_lines = pose_job.get();
  const auto camera = camera_job.get();

  std::vector<Event> events;
  events.reserve(encoder_chunks.size() + pose_lines.size() + camera.size() + 1024);
  for (std::size_t i = 0; i < encoder_chunks.size(); ++i) {
    events.push_back({encoder_chunks[i].host_time, Source::Encoder, i});
  }
  for (std::size_t i = 0; i < pose_lines.size(); ++i) {
    events.push_back({pose_lines[i].send_time, Source::Pose, i});
  }
  for (std::size_t i = 0; i < camera.size(); ++i) events.push_back({camera[i].t, Source::Camera, i});
  const Timestamp end = std::max({from_seconds(scenario.duration_s),
                                  events.empty() ? Timestamp{0} : std::max_element(events.begin(), events.end())->t});
  for (std::int64_t k = 0; tick_time(k, options.output_rate_hz) <= end; ++k) {
    events.push_back({tick_time(k, options.output_rate_hz), Source::Tick, static_cast<std::size_t>(k)});
  }
  std::sort(events.begin(), events.end());

  ManualClock clock;
  ReceiptStamper encoder_stamper(clock);
  ReceiptStamper pose_stamper(clock);
  ReceiptStamper camera_stamper(clock);
  wire::FrameDecoder decoder;
  wire::LineSplitter splitter;
  DualRateBuffer buffer(options);

  CollectedSession out;
  SessionBuffers& b = out.buffers;
  std::vector<std::int64_t> offsets;
  offsets.reserve(pose_lines.size());

  auto append_poses = [&b](const std::vector<PoseSample>& samples) {
    for (const auto& s : samples) b.poses.push_back(s.t, s.pose);
  };

  for (const Event& e : events) {
    clock.set(e.t);
    switch (e.source) {
      case Source::Encoder:
        for (const auto& frame : decoder.feed(encoder_chunks[e.index].bytes)) {
          b.encoders.push_back(encoder_stamper.stamp(), frame);
        }
        break;
      case Source::Pose:
        for (const auto& line : splitter.feed(pose_lines[e.index].line)) {
          try {
            const auto record = wire::decode_pose_record(line);
            const Timestamp receipt = pose_stamper.stamp();
            offsets.push_back((receipt - record.t).count());
            buffer.push(record, receipt);
            ++out.stats.pose_records;
          } catch (const wire::PoseDecodeError&) {
            ++out.stats.pose_records_rejected;
          }
        }
        break;
      case Source::Camera:
        b.video.push_back(camera_stamper.stamp(), camera[e.index].value);
        break;
      case Source::Tick:
        append_poses(buffer.drain(e.t));
        break;
    }
  }
  // Collection stopped: resolve the ticks still held back.
  append_poses(buffer.flush());

  if (!offsets.empty()) {
    const auto mid = offsets.begin() + static_cast<std::ptrdiff_t>((offsets.size() - 1) / 2);
    std::nth_element(offsets.begin(), mid, offsets.end());
    out.stats.pose_clock_offset = Timestamp{*mid};
  }
  out.stats.decoder = decoder.stats();
  out.stats.resampler = buffer.stats();

  const auto cfg = KeyValueConfig::parse(scenario.to_config_text(), "scenario");
  for (const auto& [key, value] : cfg.entries()) out.meta.emplace_back(key, value);
  auto put = [&out](const char* key, auto value) { out.meta.emplace_back(key, std::to_string(value)); };
  put("pose_clock_offset_ns", out.stats.pose_clock_offset.count());
  put("encoder_frames", b.encoders.size());
  put("encoder_corrupt_frames", out.stats.decoder.desync_episodes);
  put("pose_records", out.stats.pose_records);
  put("pose_records_rejected", out.stats.pose_records_rejected);
  put("resampled_poses", b.poses.size());
  put("resampler_held", out.stats.resampler.held);
  put("resampler_gaps", out.stats.resampler.gaps);
  put("video_frames", b.video.size());
  return out;
}

}  // namespace whed::acquire
