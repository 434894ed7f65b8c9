#include "whed/cli/commands.hpp"

#include "whed/acquire/collector.hpp"
#include "whed/acquire/session.hpp"
#include "whed/core/csv.hpp"
#include "whed/postproc/pipeline.hpp"
#include "whed/postproc/transforms.hpp"
#include "whed/replay/fidelity.hpp"
#include "whed/replay/plan.hpp"
#include "whed/sim/devices.hpp"
#include "whed/thumb/solver.hpp"
#include "whed/thumb/wobble.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

namespace whed::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string session;
  std::string scenario;
  std::uint64_t seed = 1;
  std::string geometry;
  std::string calibration;
  std::string base_pose;
  std::string mount;
  std::string out;
  bool no_filter = false;

  std::string action;
  std::string pose;
  std::string q;
  std::string q_init;
  double phi = 0.0;
  std::size_t n = 500;
  double tol = 1e-9;
  std::string demo;
  std::string replay;
};

template <class... Args>
void say(std::ostream& os, fmt::format_string<Args...> f, Args&&... args) {
  os << fmt::format(f, std::forward<Args>(args)...) << '\n';
}

fs::path require_dir_flag(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(fmt::format("{} is required", flag));
  return value;
}

void require_file(const fs::path& p, const std::string& hint = {}) {
  if (!fs::is_regular_file(p)) {
    throw UsageError(fmt::format("missing file {}{}", p.string(), hint.empty() ? "" : "; " + hint));
  }
}

void ensure_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (!fs::is_directory(p)) throw IoError("cannot create directory " + p.string());
}

thumb::PassiveThumbState parse_q(const std::string& text, const char* flag) {
  const auto v = parse_number_list(text);
  if (v.size() != 2) throw UsageError(fmt::format("{} expects two numbers: theta2 theta4", flag));
  return {v[0], v[1]};
}

// ---------------------------------------------------------------- simulate

replay::CalibrationTable calibration_from_scenario(const sim::Scenario& s) {
  replay::CalibrationTable t;
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    t[static_cast<int>(c)] = replay::ChannelCalibration{
        static_cast<int>(std::lround(s.adc.count(c, s.joint_open_rad))),
        static_cast<int>(std::lround(s.adc.count(c, s.joint_closed_rad))), 1.0};
  }
  return t;
}

int cmd_simulate(const Flags& f, std::ostream& out) {
  const fs::path dir = require_dir_flag(!f.out.empty() ? f.out : f.session, "--out (or --session)");
  sim::Scenario sc;
  if (!f.scenario.empty()) {
    require_file(f.scenario);
    sc = sim::Scenario::from_config(KeyValueConfig::load(f.scenario));
  }
  sc.seed = f.seed;
  sc.validate();

  const auto collected = acquire::collect_simulated_session(sc);
  acquire::persist_session(collected.buffers, dir, collected.meta);

  std::vector<Timestamp> ticks;
  ticks.reserve(collected.buffers.poses.size());
  for (const auto& s : collected.buffers.poses) ticks.push_back(s.t);
  csv::write_poses(dir / "truth.csv", sim::truth_phone_poses(sc, ticks));
  replay::write_calibration(dir / "calibration.csv", calibration_from_scenario(sc));

  say(out, "session = {}", dir.string());
  say(out, "encoder_frames = {}", collected.buffers.encoders.size());
  say(out, "pose_samples = {}", collected.buffers.poses.size());
  say(out, "video_frames = {}", collected.buffers.video.size());
  say(out, "corrupt_frames = {}", collected.stats.decoder.desync_episodes);
  return kOk;
}

// ---------------------------------------------------------------- process

int cmd_process(const Flags& f, std::ostream& out, std::ostream& err) {
  const fs::path dir = require_dir_flag(f.session, "--session");
  for (const char* name : {"encoders.csv", "poses.csv", "video.csv"}) {
    require_file(dir / name, "not a session directory");
  }
  const fs::path dest = f.out.empty() ? dir : fs::path(f.out);
  ensure_dir(dest);

  const auto session = acquire::load_session(dir);
  postproc::ProcessOptions opt;
  opt.filter = !f.no_filter;
  const auto result = postproc::process_session(session, opt);
  postproc::write_processed(result, dest);

  const auto& r = result.filtered.report;
  if (session.video.empty()) say(err, "warning: session has no video ticks; outputs are empty");
  for (const auto& w : r.warnings) say(err, "warning: {}", w);
  say(out, "video_ticks = {}", r.video_ticks);
  say(out, "matched = {}", r.matched);
  say(out, "dropped = {}", r.dropped);
  say(out, "filtered = {}", result.was_filtered);
  return kOk;
}

// ---------------------------------------------------------------- replay / compare

void print_report(std::ostream& out, const replay::FidelityReport& r) {
  say(out, "matched = {}", r.matched);
  say(out, "position_rmse_m = {:.9g}", r.position_rmse);
  say(out, "position_max_m = {:.9g}", r.position_max);
  say(out, "orientation_mean_rad = {:.9g}", r.orientation_mean);
  say(out, "orientation_max_rad = {:.9g}", r.orientation_max);
}

int cmd_replay(const Flags& f, std::ostream& out) {
  const fs::path dir = require_dir_flag(f.session, "--session");
  const fs::path filtered_path = dir / "filtered.csv";
  require_file(filtered_path, "run `whed process` first");
  const fs::path cal_path = f.calibration.empty() ? dir / "calibration.csv" : fs::path(f.calibration);
  require_file(cal_path, "a calibration file is required (--calibration)");
  const fs::path dest = f.out.empty() ? dir : fs::path(f.out);
  ensure_dir(dest);

  const auto meta = acquire::load_session_meta(dir);
  const RigidTransform true_mount = meta.get_pose("mount", sim::Scenario{}.mount);
  const RigidTransform mount = f.mount.empty() ? true_mount : parse_pose_text(f.mount);
  const RigidTransform base = f.base_pose.empty() ? RigidTransform::identity() : parse_pose_text(f.base_pose);

  const auto calibration = replay::read_calibration(cal_path);
  const auto records = csv::read_synced(filtered_path);
  const auto plan = replay::build_replay_plan(records, calibration, mount, base);
  replay::write_plan_csv(dest / "plan.csv", plan.rows);
  const auto log = replay::stream_to_sink(plan);
  replay::write_replay_log_csv(dest / "replay_log.csv", log);

  // Reference: ground-truth phone poses, put through the same filter as the
  // demonstration and retargeted with the rig's true mount.
  Series<RigidTransform> phone;
  RigidTransform reference_mount = mount;
  if (fs::is_regular_file(dir / "truth.csv")) {
    phone = csv::read_poses(dir / "truth.csv");
    bool was_filtered = true;
    if (fs::is_regular_file(dir / "sync_report.txt")) {
      was_filtered = KeyValueConfig::load(dir / "sync_report.txt").get_bool("filtered", true);
    }
    if (was_filtered) phone = postproc::filter_pose_series(phone);
    reference_mount = true_mount;
  } else {
    for (const auto& r : records) phone.push_back(r.t, r.pose);
  }
  const auto demo = phone.map([&](const RigidTransform& p) {
    return postproc::retarget_pose(p, reference_mount, base);
  });
  const auto commands = plan.rows.map([](const replay::PlanRow& r) { return r.commands; });
  const auto cmp = replay::compare_trajectories(demo, log, &commands);
  replay::write_fidelity_report(dest / "fidelity_report.txt", cmp.report);
  replay::write_errors_csv(dest / "errors.csv", cmp.errors);

  say(out, "plan_rows = {}", plan.rows.size());
  print_report(out, cmp.report);
  return kOk;
}

bool has_header(const fs::path& p, const csv::Schema& schema) {
  std::ifstream in(p, std::ios::binary);
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line == schema.header();
}

int cmd_compare(const Flags& f, std::ostream& out) {
  if (f.demo.empty() || f.replay.empty()) throw UsageError("--demo and --replay are required");
  require_file(f.demo);
  require_file(f.replay);
  Series<RigidTransform> demo;
  const Series<MotorCommands>* commands = nullptr;
  Series<MotorCommands> demo_commands;
  if (has_header(f.demo, csv::poses_schema())) {
    demo = csv::read_poses(f.demo);
  } else {
    const auto rows = replay::read_plan_csv(f.demo);
    demo = rows.map([](const replay::PlanRow& r) { return r.target; });
    demo_commands = rows.map([](const replay::PlanRow& r) { return r.commands; });
    commands = &demo_commands;
  }
  const auto replayed = replay::read_plan_csv(f.replay).map(
      [](const replay::PlanRow& r) { return sim::RobotCommand{r.commands, r.target}; });
  const auto cmp = replay::compare_trajectories(demo, replayed, commands);
  if (!f.out.empty()) {
    ensure_dir(f.out);
    replay::write_fidelity_report(fs::path(f.out) / "fidelity_report.txt", cmp.report);
    replay::write_errors_csv(fs::path(f.out) / "errors.csv", cmp.errors);
  }
  print_report(out, cmp.report);
  return kOk;
}

// ---------------------------------------------------------------- thumb

void print_residuals(std::ostream& out, const thumb::Residuals& r) {
  say(out, "res_d = {:.9g}", r.distal);
  say(out, "res_m = {:.9g}", r.metacarpal);
}

int cmd_thumb(const Flags& f, std::ostream& out) {
  thumb::ThumbCouplingModel model;
  if (!f.geometry.empty()) {
    require_file(f.geometry);
    model = thumb::ThumbCouplingModel::from_config(KeyValueConfig::load(f.geometry));
  }

  if (f.action == "residual") {
    if (f.pose.empty() || f.q.empty()) throw UsageError("thumb residual needs --pose and --q");
    print_residuals(out, thumb::constraint_residual(parse_pose_text(f.pose), parse_q(f.q, "--q"), model));
    return kOk;
  }

  if (f.action == "wobble") {
    if (f.q.empty()) throw UsageError("thumb wobble needs --q");
    if (f.out.empty()) throw UsageError("thumb wobble needs --out <file.csv>");
    const auto q = parse_q(f.q, "--q");
    thumb::WobbleOptions opt;
    opt.tol = f.tol;
    opt.seed = f.seed;
    if (!f.pose.empty()) opt.start = parse_pose_text(f.pose);
    const auto samples = thumb::sample_wobble_space(q, model, f.n, opt);
    thumb::write_wobble_csv(f.out, samples, q, model);
    double worst = 0.0;
    for (const auto& s : samples) worst = std::max(worst, thumb::constraint_residual(s, q, model).max_abs());
    say(out, "samples = {}", samples.size());
    say(out, "max_abs_residual = {:.3g}", worst);
    return kOk;
  }

  if (f.action == "solve") {
    RigidTransform body;
    if (!f.pose.empty()) {
      body = parse_pose_text(f.pose);
    } else if (!f.q.empty()) {
      body = thumb::forward_construct_exo_pose(parse_q(f.q, "--q"), model, f.seed);
    } else {
      throw UsageError("thumb solve needs --pose, or --q to construct a pose");
    }
    const auto& lim = model.limits;
    thumb::PassiveThumbState init{0.5 * (lim.theta2_min + lim.theta2_max),
                                  0.5 * (lim.theta4_min + lim.theta4_max)};
    if (!f.q_init.empty()) {
      init = parse_q(f.q_init, "--q-init");
    } else if (f.phi != 0.0) {
      init.theta2 = std::clamp(thumb::map_phi_to_theta2(f.phi, model.phi), lim.theta2_min, lim.theta2_max);
    }
    const auto result = thumb::solve_passive_thumb({body, f.phi}, model, init);
    say(out, "theta2 = {:.12g}", result.q.theta2);
    say(out, "theta4 = {:.12g}", result.q.theta4);
    print_residuals(out, result.residuals);
    say(out, "iterations = {}", result.iterations);
    return kOk;
  }
  throw UsageError("thumb action must be one of: solve, wobble, residual");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Demonstration capture, processing and replay toolkit for the WHED hand exoskeleton", "whed"};
  app.require_subcommand(1);
  Flags f;

  auto session = [&f](CLI::App* s, const char* help) {
    s->add_option("--session", f.session, help)->envname("WHED_SESSION");
  };
  auto out_dir = [&f](CLI::App* s, const char* help) {
    s->add_option("--out", f.out, help)->envname("WHED_OUT");
  };
  auto seed = [&f](CLI::App* s) {
    s->add_option("--seed", f.seed, "random seed")->envname("WHED_SEED")->capture_default_str();
  };

  auto* simulate = app.add_subcommand("simulate", "run the simulated devices and record a session");
  session(simulate, "session directory to create (alias of --out)");
  out_dir(simulate, "session directory to create");
  simulate->add_option("--scenario", f.scenario, "scenario key = value file")->envname("WHED_SCENARIO");
  seed(simulate);

  auto* process = app.add_subcommand("process", "synchronize and filter a recorded session");
  session(process, "session directory");
  out_dir(process, "output directory (default: the session)");
  process->add_flag("--no-filter", f.no_filter, "skip the low-pass and moving-average stages")
      ->envname("WHED_NO_FILTER");

  auto* replay_cmd = app.add_subcommand("replay", "build a replay plan, run it on the ideal robot, report fidelity");
  session(replay_cmd, "processed session directory");
  out_dir(replay_cmd, "output directory (default: the session)");
  replay_cmd->add_option("--calibration", f.calibration, "calibration CSV (default: <session>/calibration.csv)")
      ->envname("WHED_CALIBRATION");
  replay_cmd->add_option("--base-pose", f.base_pose, "P_base as 'px py pz qw qx qy qz' (default: identity)")
      ->envname("WHED_BASE_POSE");
  replay_cmd->add_option("--mount", f.mount, "phone -> EEF mount offset (default: from meta.txt)")
      ->envname("WHED_MOUNT");

  auto* thumb_cmd = app.add_subcommand("thumb", "passive-thumb coupling tools");
  thumb_cmd->add_option("action", f.action, "solve | wobble | residual")->required();
  thumb_cmd->add_option("--geometry", f.geometry, "thumb geometry key = value file")->envname("WHED_GEOMETRY");
  thumb_cmd->add_option("--pose", f.pose, "exoskeleton body pose 'px py pz qw qx qy qz'")->envname("WHED_POSE");
  thumb_cmd->add_option("--q", f.q, "passive-thumb joints 'theta2 theta4'")->envname("WHED_Q");
  thumb_cmd->add_option("--q-init", f.q_init, "solver start 'theta2 theta4'")->envname("WHED_Q_INIT");
  thumb_cmd->add_option("--phi", f.phi, "instrumented IP angle, rad")->envname("WHED_PHI");
  thumb_cmd->add_option("--n", f.n, "wobble sample count")->envname("WHED_N")->capture_default_str();
  thumb_cmd->add_option("--tol", f.tol, "wobble residual tolerance, m")->envname("WHED_TOL")->capture_default_str();
  out_dir(thumb_cmd, "wobble output CSV");
  seed(thumb_cmd);

  auto* compare = app.add_subcommand("compare", "compare a demonstration with a replay log");
  compare->add_option("--demo", f.demo, "poses CSV or plan CSV")->envname("WHED_DEMO");
  compare->add_option("--replay", f.replay, "replay log CSV (plan schema)")->envname("WHED_REPLAY");
  out_dir(compare, "directory for fidelity_report.txt and errors.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(f, out);
    if (process->parsed()) return cmd_process(f, out, err);
    if (replay_cmd->parsed()) return cmd_replay(f, out);
    if (thumb_cmd->parsed()) return cmd_thumb(f, out);
    if (compare->parsed()) return cmd_compare(f, out);
  } catch (const UsageError& e) {
    say(err, "whed: {}", e.what());
    return kUsage;
  } catch (const NumericalError& e) {
    say(err, "whed: {}", e.what());
    return kNumerical;
  } catch (const Error& e) {
    say(err, "whed: {}", e.what());
    return kData;
  } catch (const std::exception& e) {
    say(err, "whed: unexpected error: {}", e.what());
    return kUnexpected;
  }
  return kUsage;
}

}  // namespace whed::cli
