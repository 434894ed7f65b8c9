#pragma once

#include "whed/core/series.hpp"
#include "whed/core/types.hpp"
#include "whed/replay/calibration.hpp"
#include "whed/sim/devices.hpp"

#include <filesystem>
#include <span>

namespace whed::replay {

struct PlanRow {
  MotorCommands commands{};
  RigidTransform target;
};

/// Hand commands and arm targets on the synced master clock.
struct ReplayPlan {
  RigidTransform base;
  Series<PlanRow> rows;
};

/// One row per synced record: motor commands from the calibration, arm
/// targets from the retargeted phone pose turned into relative actions and
/// re-integrated against P_base.
ReplayPlan build_replay_plan(std::span<const SyncedRecord> records, const CalibrationTable& calibration,
                             const RigidTransform& T_eef_phone, const RigidTransform& P_base);

/// Streams the plan rows, in order, to the ideal robot sink.
sim::ReplayLog stream_to_sink(const ReplayPlan& plan);

/// CSV `t_ns,cmd0..cmd5,px,py,pz,qw,qx,qy,qz`; also used for replay logs.
void write_plan_csv(const std::filesystem::path& path, const Series<PlanRow>& rows);
void write_replay_log_csv(const std::filesystem::path& path, const sim::ReplayLog& log);
Series<PlanRow> read_plan_csv(const std::filesystem::path& path);

}  // namespace whed::replay
