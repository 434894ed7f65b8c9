#include "whed/cli/commands.hpp"
#include "whed/core/csv.hpp"
#include "whed/core/kvconfig.hpp"
#include "whed/sim/scenario.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace whed;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
  KeyValueConfig kv() const { return KeyValueConfig::parse(out); }
};

Run whed_run(std::vector<std::string> args) {
  args.insert(args.begin(), "whed");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Through the installed binary, for exit statuses and environment overrides.
int binary(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" WHED_BINARY "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Scratch {
 public:
  Scratch() {
    std::random_device rd;
    root_ = fs::temp_directory_path() / ("whed_cli_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(root_);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(root_, ec);
  }
  fs::path operator/(const std::string& s) const { return root_ / s; }

 private:
  fs::path root_;
};

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

const char* kExactScenario =
    "duration_s = 5\n"
    "pose_rate_hz = 30\n"
    "delay_min_ms = 0\n"
    "delay_max_ms = 0\n"
    "encoder_skew_ppm = 0\n"
    "pose_skew_ppm = 0\n"
    "camera_skew_ppm = 0\n";

std::string pose_text(const RigidTransform& t) { return format_pose_text(t); }

}  // namespace

TEST_CASE("simulate is deterministic for a given seed") {
  Scratch s;
  REQUIRE(whed_run({"simulate", "--out", (s / "a").string(), "--seed", "5"}).code == 0);
  REQUIRE(whed_run({"simulate", "--out", (s / "b").string(), "--seed", "5"}).code == 0);
  REQUIRE(whed_run({"simulate", "--out", (s / "c").string(), "--seed", "6"}).code == 0);
  for (const char* f : {"encoders.csv", "poses.csv", "video.csv", "meta.txt", "truth.csv", "calibration.csv"}) {
    CHECK(fs::exists(s / "a" / f));
    CHECK(slurp(s / "a" / f) == slurp(s / "b" / f));
  }
  CHECK(slurp(s / "a" / "encoders.csv") != slurp(s / "c" / "encoders.csv"));
}

TEST_CASE("simulate, process and replay produce schema-valid outputs") {
  Scratch s;
  const std::string dir = (s / "session").string();
  const auto sim = whed_run({"simulate", "--out", dir});
  REQUIRE(sim.code == 0);
  CHECK(sim.kv().get_int("encoder_frames", 0) == 10000);
  CHECK(sim.kv().get_int("video_frames", 0) == 300);

  const auto proc = whed_run({"process", "--session", dir});
  REQUIRE(proc.code == 0);
  CHECK(proc.kv().get_int("dropped", -1) == 0);
  CHECK(proc.kv().get_int("matched", 0) == 300);

  const auto rep = whed_run({"replay", "--session", dir, "--base-pose", "0.3,0,0.2,0,0,0,1"});
  REQUIRE(rep.code == 0);
  CHECK(rep.kv().get_int("plan_rows", 0) == 300);
  CHECK(rep.kv().get_double("position_rmse_m", 1.0) < 1e-3);
  CHECK(rep.kv().get_double("orientation_mean_rad", 1.0) < 1e-2);

  const fs::path d = dir;
  const std::pair<const char*, const char*> files[] = {
      {"encoders.csv", "encoders"}, {"poses.csv", "poses"},       {"video.csv", "video"},
      {"truth.csv", "poses"},       {"calibration.csv", "calibration"}, {"synced.csv", "synced"},
      {"filtered.csv", "synced"},   {"plan.csv", "plan"},         {"replay_log.csv", "plan"},
      {"errors.csv", "errors"}};
  for (const auto& [file, schema] : files) {
    INFO(file);
    const auto* sc = csv::find_schema(schema);
    REQUIRE(sc != nullptr);
    CHECK_NOTHROW(csv::validate_file(d / file, *sc));
  }
  CHECK(slurp(d / "sync_report.txt").find("dropped = 0") != std::string::npos);
  CHECK(slurp(d / "fidelity_report.txt").find("position_rmse") != std::string::npos);

  const auto cmp = whed_run({"compare", "--demo", (d / "plan.csv").string(), "--replay", (d / "replay_log.csv").string()});
  REQUIRE(cmp.code == 0);
  CHECK(cmp.kv().get_double("position_rmse_m", 1.0) == 0.0);
  const auto cmp2 = whed_run({"compare", "--demo", (d / "poses.csv").string(), "--replay", (d / "replay_log.csv").string(),
                              "--out", (s / "cmp").string()});
  CHECK(cmp2.code == 0);
  CHECK(fs::exists(s / "cmp" / "errors.csv"));
}

TEST_CASE("exact path replays with zero error and a wrong mount shows its offset") {
  Scratch s;
  write_text(s / "exact.txt", kExactScenario);
  const std::string dir = (s / "session").string();
  REQUIRE(whed_run({"simulate", "--out", dir, "--scenario", (s / "exact.txt").string()}).code == 0);
  REQUIRE(whed_run({"process", "--session", dir, "--no-filter"}).code == 0);
  const auto rep = whed_run({"replay", "--session", dir});
  REQUIRE(rep.code == 0);
  CHECK(rep.kv().get_double("position_rmse_m", 1.0) < 1e-9);
  CHECK(rep.kv().get_double("orientation_max_rad", 1.0) < 1e-9);

  const RigidTransform truth = sim::Scenario{}.mount;
  const RigidTransform wrong(truth.rotation(), truth.translation() + Vec3(0, 0.01, 0));
  const auto bad = whed_run({"replay", "--session", dir, "--mount", pose_text(wrong), "--out", (s / "wrong").string()});
  REQUIRE(bad.code == 0);
  CHECK(bad.kv().get_double("position_rmse_m", 0.0) == doctest::Approx(0.01).epsilon(1e-6));
  CHECK(bad.kv().get_double("orientation_max_rad", 1.0) < 1e-9);
}

TEST_CASE("a truncated pose stream drops the trailing ticks") {
  Scratch s;
  const fs::path dir = s / "session";
  REQUIRE(whed_run({"simulate", "--out", dir.string()}).code == 0);
  std::istringstream in(slurp(dir / "poses.csv"));
  std::string line, kept;
  for (int i = 0; i < 301 && std::getline(in, line); ++i) kept += line + "\n";  // first 5 s
  write_text(dir / "poses.csv", kept);
  const auto proc = whed_run({"process", "--session", dir.string()});
  REQUIRE(proc.code == 0);
  const long dropped = proc.kv().get_int("dropped", 0);
  CHECK(dropped > 140);
  CHECK(dropped < 155);
  const auto report = KeyValueConfig::load(dir / "sync_report.txt");
  CHECK(report.get_int("dropped_pose_gate", 0) == dropped);
  CHECK(report.get_int("dropped_encoder_gate", -1) == 0);
}

TEST_CASE("an empty session processes to empty outputs with a warning") {
  Scratch s;
  const fs::path dir = s / "empty";
  fs::create_directories(dir);
  write_text(dir / "encoders.csv", "t_ns,ch0,ch1,ch2,ch3,ch4,ch5\n");
  write_text(dir / "poses.csv", "t_ns,px,py,pz,qw,qx,qy,qz\n");
  write_text(dir / "video.csv", "t_ns,frame_idx\n");
  const auto r = whed_run({"process", "--session", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  CHECK(slurp(dir / "synced.csv") == csv::synced_schema().header() + "\n");
  CHECK(slurp(dir / "filtered.csv") == csv::synced_schema().header() + "\n");
}

TEST_CASE("exit codes") {
  Scratch s;
  const fs::path dir = s / "session";
  write_text(s / "short.txt", "duration_s = 2\n");
  REQUIRE(whed_run({"simulate", "--out", dir.string(), "--scenario", (s / "short.txt").string()}).code == 0);
  REQUIRE(whed_run({"process", "--session", dir.string()}).code == 0);

  const auto missing_cal = whed_run({"replay", "--session", dir.string(), "--calibration", (s / "nope.csv").string()});
  CHECK(missing_cal.code == 2);
  CHECK(missing_cal.err.find("nope.csv") != std::string::npos);

  CHECK(whed_run({}).code == 2);
  CHECK(whed_run({"frobnicate"}).code == 2);
  CHECK(whed_run({"process"}).code == 2);
  CHECK(whed_run({"thumb", "juggle"}).code == 2);

  // corrupt row 5 (line 5), column 3
  std::istringstream in(slurp(dir / "poses.csv"));
  std::string line, text;
  for (int i = 1; std::getline(in, line); ++i) {
    if (i == 5) {
      const auto a = line.find(',');
      const auto b = line.find(',', a + 1);
      const auto c = line.find(',', b + 1);
      line = line.substr(0, b + 1) + "abc" + line.substr(c);
    }
    text += line + "\n";
  }
  write_text(dir / "poses.csv", text);
  const auto schema = whed_run({"process", "--session", dir.string()});
  CHECK(schema.code == 3);
  CHECK(schema.err.find("poses.csv:5: column 3") != std::string::npos);

  const auto far = whed_run({"thumb", "solve", "--pose", "0.5 0 0 1 0 0 0"});
  CHECK(far.code == 4);
  CHECK(far.err.find("res_d") != std::string::npos);
}

TEST_CASE("thumb subcommands") {
  Scratch s;
  const auto solved = whed_run({"thumb", "solve", "--q", "0.7 0.3", "--seed", "3"});
  REQUIRE(solved.code == 0);
  CHECK(solved.kv().get_double("theta2", 0) == doctest::Approx(0.7).epsilon(1e-6));
  CHECK(solved.kv().get_double("theta4", 0) == doctest::Approx(0.3).epsilon(1e-6));

  const auto res = whed_run({"thumb", "residual", "--pose", "0.2 0 0 1 0 0 0", "--q", "0 0"});
  CHECK(res.code == 0);
  CHECK(res.kv().get_double("res_d", 0) > 0);
  CHECK(res.kv().get_double("res_m", 0) > 0);

  const auto out = s / "wobble.csv";
  const auto wob = whed_run({"thumb", "wobble", "--q", "0.7 0.3", "--n", "500", "--out", out.string()});
  REQUIRE(wob.code == 0);
  const auto rows = csv::read(out, *csv::find_schema("wobble"));
  REQUIRE(rows.size() == 500);
  for (const auto& r : rows) {
    CHECK(std::abs(r.real(7)) < 1e-9);
    CHECK(std::abs(r.real(8)) < 1e-9);
  }

  write_text(s / "geom.txt", "link_distal = 0.032\ntheta4_max = 1.0\n");
  const auto g = whed_run({"thumb", "residual", "--geometry", (s / "geom.txt").string(), "--pose", "0 0 0 1 0 0 0", "--q", "0 0"});
  CHECK(g.kv().get_double("res_d", 0) == doctest::Approx(0.02618051263561058 - 0.002).epsilon(1e-9));
  write_text(s / "bad.txt", "link_distal = -1\n");
  CHECK(whed_run({"thumb", "residual", "--geometry", (s / "bad.txt").string(), "--pose", "0 0 0 1 0 0 0", "--q", "0 0"}).code == 3);
}

TEST_CASE("the binary honours environment overrides") {
  Scratch s;
  CHECK(binary("simulate --out '" + (s / "flag").string() + "' --seed 7 --scenario '" + (s / "short.txt").string() + "'") == 2);
  write_text(s / "short.txt", "duration_s = 1\n");
  CHECK(binary("simulate --out '" + (s / "flag").string() + "' --seed 7 --scenario '" + (s / "short.txt").string() + "'") == 0);
  CHECK(binary("simulate --out '" + (s / "env").string() + "'",
               "WHED_SEED=7 WHED_SCENARIO='" + (s / "short.txt").string() + "'") == 0);
  CHECK(binary("simulate --out '" + (s / "default").string() + "' --scenario '" + (s / "short.txt").string() + "'") == 0);
  CHECK(slurp(s / "flag" / "encoders.csv") == slurp(s / "env" / "encoders.csv"));
  CHECK(slurp(s / "flag" / "encoders.csv") != slurp(s / "default" / "encoders.csv"));
  CHECK(binary("thumb solve --pose '0.5 0 0 1 0 0 0'") == 4);
  CHECK(binary("--help") == 0);
}
