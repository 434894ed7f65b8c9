#include "whed/replay/fidelity.hpp"

#include "whed/core/csv.hpp"
#include "whed/core/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>

namespace whed::replay {

namespace {

template <class T>
std::optional<std::size_t> gated_nearest(const Series<T>& s, Timestamp t, Timestamp gate) {
  const auto i = s.nearest_index(t);
  if (!i) return std::nullopt;
  const Timestamp d = s[*i].t > t ? s[*i].t - t : t - s[*i].t;
  return d <= gate ? i : std::nullopt;
}

}  // namespace

Comparison compare_trajectories(const Series<RigidTransform>& demo, const sim::ReplayLog& replay,
                                const Series<MotorCommands>* reference_commands,
                                const FidelityOptions& options) {
  Comparison out;
  FidelityReport& r = out.report;
  double pos_sq = 0.0;
  double ang_sum = 0.0;
  std::array<double, kChannelCount> cmd_sq{};
  std::size_t cmd_n = 0;

  for (const auto& s : replay) {
    const auto i = gated_nearest(demo, s.t, options.max_offset);
    if (!i) {
      ++r.unmatched;
      continue;
    }
    const RigidTransform& d = demo[*i].value;
    const double pe = (s.value.pose.translation() - d.translation()).norm();
    const double ae = geodesic_angle(s.value.pose.rotation(), d.rotation());
    ++r.matched;
    pos_sq += pe * pe;
    ang_sum += ae;
    r.position_max = std::max(r.position_max, pe);
    r.orientation_max = std::max(r.orientation_max, ae);
    out.errors.push_back({s.t, pe, ae});

    if (reference_commands) {
      if (const auto k = gated_nearest(*reference_commands, s.t, options.max_offset)) {
        ++cmd_n;
        for (std::size_t c = 0; c < kChannelCount; ++c) {
          const double e = static_cast<double>(s.value.commands[c]) -
                           static_cast<double>((*reference_commands)[*k].value[c]);
          cmd_sq[c] += e * e;
        }
      }
    }
  }
  if (r.matched == 0) {
    throw DataError(fmt::format("no replay sample lies within {} ms of a demonstration sample "
                                "({} replay, {} demonstration samples)",
                                options.max_offset.count() / 1'000'000, replay.size(), demo.size()));
  }
  r.position_rmse = std::sqrt(pos_sq / static_cast<double>(r.matched));
  r.orientation_mean = ang_sum / static_cast<double>(r.matched);
  if (cmd_n > 0) {
    for (std::size_t c = 0; c < kChannelCount; ++c) {
      r.command_rmse[c] = std::sqrt(cmd_sq[c] / static_cast<double>(cmd_n));
    }
  }
  return out;
}

void write_fidelity_report(const std::filesystem::path& path, const FidelityReport& r) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << fmt::format("matched = {}\n", r.matched) << fmt::format("unmatched = {}\n", r.unmatched)
      << fmt::format("position_rmse_m = {:.9g}\n", r.position_rmse)
      << fmt::format("position_max_m = {:.9g}\n", r.position_max)
      << fmt::format("orientation_mean_rad = {:.9g}\n", r.orientation_mean)
      << fmt::format("orientation_max_rad = {:.9g}\n", r.orientation_max);
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    out << fmt::format("command_rmse_{} = {:.9g}\n", c, r.command_rmse[c]);
  }
  if (!out) throw IoError("write failed for " + path.string());
}

void write_errors_csv(const std::filesystem::path& path, const std::vector<ErrorSample>& errors) {
  csv::Writer w(path, *csv::find_schema("errors"));
  for (const auto& e : errors) {
    const std::string fields[] = {std::to_string(e.t.count()), csv::format_real(e.position),
                                  csv::format_real(e.angle)};
    w.write_row(fields);
  }
  w.close();
}

}  // namespace whed::replay
