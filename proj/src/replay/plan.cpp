#include "whed/replay/plan.hpp"

#include "whed/core/csv.hpp"
#include "whed/postproc/transforms.hpp"
#include "whed/replay/arm.hpp"

#include <fmt/format.h>

namespace whed::replay {

ReplayPlan build_replay_plan(std::span<const SyncedRecord> records, const CalibrationTable& calibration,
                             const RigidTransform& T_eef_phone, const RigidTransform& P_base) {
  Series<RigidTransform> eef;
  eef.reserve(records.size());
  for (const auto& r : records) eef.push_back(r.t, postproc::retarget_pose(r.pose, T_eef_phone, P_base));
  const auto targets = reconstruct_arm_trajectory(extract_relative_actions(eef, P_base), P_base);

  ReplayPlan plan{P_base, {}};
  plan.rows.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    plan.rows.push_back(records[i].t, PlanRow{map_channels(records[i].channels, calibration),
                                              targets[i].value});
  }
  return plan;
}

sim::ReplayLog stream_to_sink(const ReplayPlan& plan) {
  std::vector<sim::TimedCommand> commands;
  commands.reserve(plan.rows.size());
  for (const auto& row : plan.rows) {
    commands.push_back({row.t, sim::RobotCommand{row.value.commands, row.value.target}});
  }
  return sim::run_robot_sink(commands);
}

namespace {

template <class Rows, class Get>
void write_rows(const std::filesystem::path& path, const Rows& rows, Get get) {
  csv::Writer w(path, *csv::find_schema("plan"));
  std::vector<std::string> fields;
  for (const auto& row : rows) {
    const auto& [commands, pose] = get(row.value);
    fields.clear();
    fields.push_back(std::to_string(row.t.count()));
    for (auto c : commands) fields.push_back(std::to_string(c));
    for (auto& f : csv::pose_fields(pose)) fields.push_back(std::move(f));
    w.write_row(fields);
  }
  w.close();
}

}  // namespace

void write_plan_csv(const std::filesystem::path& path, const Series<PlanRow>& rows) {
  write_rows(path, rows, [](const PlanRow& r) { return std::pair{r.commands, r.target}; });
}

void write_replay_log_csv(const std::filesystem::path& path, const sim::ReplayLog& log) {
  write_rows(path, log, [](const sim::RobotCommand& c) { return std::pair{c.commands, c.pose}; });
}

Series<PlanRow> read_plan_csv(const std::filesystem::path& path) {
  Series<PlanRow> out;
  const std::string source = path.string();
  for (const auto& row : csv::read(path, *csv::find_schema("plan"))) {
    PlanRow p;
    for (std::size_t c = 0; c < kChannelCount; ++c) {
      const auto v = row.integer(1 + c);
      if (v < 0 || v > kMotorMax) {
        throw SchemaError(source, row.line, 2 + c, fmt::format("command {} outside [0, 65535]", v));
      }
      p.commands[c] = static_cast<std::uint16_t>(v);
    }
    p.target = csv::pose_from_row(row, 1 + kChannelCount, source);
    const Timestamp t{row.integer(0)};
    if (!out.empty() && t <= out.back().t) {
      throw SchemaError(source, row.line, 1, "t_ns must be strictly increasing");
    }
    out.push_back(t, p);
  }
  return out;
}

}  // namespace whed::replay
