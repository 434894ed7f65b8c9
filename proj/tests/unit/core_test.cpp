#include "test_util.hpp"

#include "whed/core/angles.hpp"
#include "whed/core/csv.hpp"
#include "whed/core/error.hpp"
#include "whed/core/kvconfig.hpp"
#include "whed/core/quaternion.hpp"
#include "whed/core/rigid_transform.hpp"
#include "whed/core/series.hpp"
#include "whed/core/time.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace whed;

namespace {

// Rotation matrix from a unit quaternion, written out term by term.
Eigen::Matrix3d oracle_matrix(double w, double x, double y, double z) {
  Eigen::Matrix3d m;
  m << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return m;
}

Eigen::Matrix4d oracle_homogeneous(const RigidTransform& t) {
  const Quaternion& q = t.rotation();
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.block<3, 3>(0, 0) = oracle_matrix(q.w(), q.x(), q.y(), q.z());
  m.block<3, 1>(0, 3) = t.translation();
  return m;
}

double oracle_wrap(double x) {
  while (x >= kPi) x -= kTwoPi;
  while (x < -kPi) x += kTwoPi;
  return x;
}

bool near_transform(const RigidTransform& a, const RigidTransform& b, double tol) {
  return (a.translation() - b.translation()).norm() < tol &&
         geodesic_angle(a.rotation(), b.rotation()) < tol;
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("quaternion constructor normalizes and canonicalizes the sign") {
  const Quaternion q(-2.0, 0.0, 0.0, 0.0);
  CHECK(q.w() == 1.0);
  CHECK(q.x() == 0.0);
  const Quaternion a(0.0, -1.0, 0.0, 0.0);
  CHECK(a.x() == 1.0);
  const Quaternion b(0.0, 0.0, -3.0, 4.0);
  CHECK(b.y() == doctest::Approx(0.6));
  CHECK(b.z() == doctest::Approx(-0.8));
  CHECK(Quaternion(1, 2, 3, 4) == Quaternion(-1, -2, -3, -4));
  CHECK_THROWS_AS(Quaternion(0, 0, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(Quaternion(std::nan(""), 0, 0, 0), std::invalid_argument);
}

TEST_CASE("quaternion norm stays unit through every operation") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Quaternion a = test::random_rotation(rng);
    const Quaternion b = test::random_rotation(rng);
    for (const Quaternion& q : {a * b, a.conjugate(), slerp(a, b, 0.3), Quaternion::exp(a.log())}) {
      CHECK(std::abs(q.coeffs().norm() - 1.0) < 1e-9);
      CHECK(q.w() >= 0.0);
    }
  }
}

TEST_CASE("quaternion matrix and rotate agree with the closed-form rotation matrix") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const Quaternion q = test::random_rotation(rng);
    const Eigen::Matrix3d m = oracle_matrix(q.w(), q.x(), q.y(), q.z());
    CHECK((q.matrix() - m).cwiseAbs().maxCoeff() < 1e-12);
    const Vec3 v(0.3, -1.2, 2.0);
    CHECK((q.rotate(v) - m * v).norm() < 1e-12);
  }
}

TEST_CASE("exp and log are inverse; axis-angle matches exp") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 200; ++i) {
    const Vec3 r(u(rng), u(rng), u(rng));
    CHECK((Quaternion::exp(r).log() - r).norm() < 1e-12);
  }
  const Quaternion z90 = Quaternion::from_axis_angle(Vec3::UnitZ(), kPi / 2);
  CHECK((z90.rotate(Vec3::UnitX()) - Vec3::UnitY()).norm() < 1e-15);
  CHECK(Quaternion::exp(Vec3::Zero()) == Quaternion::identity());
}

TEST_CASE("geodesic angle") {
  const Quaternion a = Quaternion::from_axis_angle(Vec3(1, 2, 3), 0.4);
  CHECK(geodesic_angle(a, a) == 0.0);
  const Quaternion b = a * Quaternion::from_axis_angle(Vec3::UnitX(), 0.25);
  CHECK(geodesic_angle(a, b) == doctest::Approx(0.25).epsilon(1e-12));
  const Quaternion flip = Quaternion::from_axis_angle(Vec3::UnitY(), kPi);
  CHECK(geodesic_angle(Quaternion::identity(), flip) == doctest::Approx(kPi));
  CHECK(geodesic_angle(a, Quaternion(-a.w(), -a.x(), -a.y(), -a.z())) == 0.0);
}

TEST_CASE("slerp follows the sine-weighted closed form along the shorter arc") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    const Quaternion a = test::random_rotation(rng);
    const Quaternion b = test::random_rotation(rng);
    const double f = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    Eigen::Vector4d qa = a.coeffs();
    Eigen::Vector4d qb = b.coeffs();
    if (qa.dot(qb) < 0) qb = -qb;
    const double omega = std::acos(std::min(1.0, qa.dot(qb)));
    const Eigen::Vector4d expect =
        (std::sin((1 - f) * omega) * qa + std::sin(f * omega) * qb) / std::sin(omega);
    const Quaternion s = slerp(a, b, f);
    const Quaternion e(expect[0], expect[1], expect[2], expect[3]);
    CHECK(geodesic_angle(s, e) < 1e-9);
    // The interpolant lies on the geodesic: angle splits in proportion.
    CHECK(geodesic_angle(a, s) == doctest::Approx(f * geodesic_angle(a, b)).epsilon(1e-7));
  }
  const Quaternion a = test::random_rotation(rng);
  const Quaternion b = test::random_rotation(rng);
  CHECK(slerp(a, b, 0.0) == a);
  CHECK(geodesic_angle(slerp(a, b, 1.0), b) < 1e-12);
  const Quaternion same = slerp(a, a, 0.5);
  CHECK((same.coeffs() - a.coeffs()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("compose examples") {
  CHECK(compose(RigidTransform::identity(), RigidTransform::identity()) == RigidTransform::identity());
  const RigidTransform a(Quaternion::from_axis_angle(Vec3::UnitZ(), kPi / 2), Vec3(1, 0, 0));
  const RigidTransform b = RigidTransform::from_translation(Vec3(1, 0, 0));
  const RigidTransform c = compose(a, b);
  CHECK((c.translation() - Vec3(1, 1, 0)).norm() < 1e-15);
  CHECK(geodesic_angle(c.rotation(), a.rotation()) < 1e-15);
}

TEST_CASE("compose equals the homogeneous matrix product") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    const RigidTransform a = test::random_transform(rng, 2.0);
    const RigidTransform b = test::random_transform(rng, 2.0);
    const Eigen::Matrix4d expect = oracle_homogeneous(a) * oracle_homogeneous(b);
    CHECK((oracle_homogeneous(compose(a, b)) - expect).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((compose(a, b).matrix() - expect).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("group laws: identity, inverse, associativity") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 500; ++i) {
    const RigidTransform a = test::random_transform(rng, 3.0);
    const RigidTransform b = test::random_transform(rng, 3.0);
    const RigidTransform c = test::random_transform(rng, 3.0);
    CHECK(near_transform(compose(a, RigidTransform::identity()), a, 1e-12));
    CHECK(near_transform(compose(a, inverse(a)), RigidTransform::identity(), 1e-9));
    CHECK(near_transform(compose(inverse(a), a), RigidTransform::identity(), 1e-9));
    CHECK(near_transform(compose(compose(a, b), c), compose(a, compose(b, c)), 1e-9));
  }
  CHECK(inverse(RigidTransform::identity()) == RigidTransform::identity());
  const RigidTransform t = inverse(RigidTransform::from_translation(Vec3(1, 2, 3)));
  CHECK((t.translation() - Vec3(-1, -2, -3)).norm() == 0.0);
  CHECK(t.rotation() == Quaternion::identity());
  CHECK_THROWS_AS(RigidTransform(Quaternion(), Vec3(std::nan(""), 0, 0)), std::invalid_argument);
}

TEST_CASE("wrap_angle examples") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(kPi + 0.1) == doctest::Approx(-kPi + 0.1).epsilon(1e-12));
  CHECK(std::abs(wrap_angle(-3.5 * kPi) - kPi / 2) < 1e-12);
  CHECK(wrap_angle(kPi) == -kPi);
  CHECK(wrap_angle(-kPi) == -kPi);
  CHECK_THROWS_AS(wrap_angle(std::nan("")), std::domain_error);
  CHECK_THROWS_AS(wrap_angle(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("wrap_angle agrees with iterative subtraction and is idempotent") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng);
    const double w = wrap_angle(x);
    CHECK(w >= -kPi);
    CHECK(w < kPi);
    CHECK(std::abs(w - oracle_wrap(x)) < 1e-9);
    CHECK(wrap_angle(w) == w);
    const double k = (x - w) / kTwoPi;
    CHECK(std::abs(k - std::round(k)) < 1e-9);
  }
}

TEST_CASE("tick_time is exact for integral rates") {
  CHECK(tick_time(0, 60.0).count() == 0);
  CHECK(tick_time(60, 60.0).count() == 1'000'000'000);
  CHECK(tick_time(1, 60.0).count() == 16'666'666);
  for (std::int64_t k = 0; k < 2000; ++k) CHECK(tick_time(2 * k, 60.0) == tick_time(k, 30.0));
  CHECK(tick_time(3, 2.5).count() == 1'200'000'000);
  CHECK(device_to_host(Timestamp{123}, 0.0).count() == 123);
  CHECK(device_to_host(Timestamp{1'000'000'000}, 100.0).count() == 999'900'010);
}

TEST_CASE("series keeps timestamps strictly increasing") {
  Series<int> s;
  CHECK(s.empty());
  CHECK_FALSE(s.nearest_index(Timestamp{5}).has_value());
  s.push_back(Timestamp{10}, 1);
  s.push_back(Timestamp{20}, 2);
  CHECK_THROWS_AS(s.push_back(Timestamp{20}, 3), std::invalid_argument);
  CHECK_THROWS_AS(s.push_back(Timestamp{5}, 3), std::invalid_argument);
  CHECK(*s.nearest_index(Timestamp{15}) == 0);  // tie goes to the earlier sample
  CHECK(*s.nearest_index(Timestamp{16}) == 1);
  CHECK(*s.nearest_index(Timestamp{-100}) == 0);
  CHECK(*s.nearest_index(Timestamp{100}) == 1);
  const auto doubled = s.map([](int v) { return 2.0 * v; });
  CHECK(doubled[1].value == 4.0);
  CHECK(doubled[1].t == Timestamp{20});
}

TEST_CASE("csv schemas and headers") {
  CHECK(csv::encoders_schema().header() == "t_ns,ch0,ch1,ch2,ch3,ch4,ch5");
  CHECK(csv::poses_schema().header() == "t_ns,px,py,pz,qw,qx,qy,qz");
  CHECK(csv::video_schema().header() == "t_ns,frame_idx");
  CHECK(csv::synced_schema().header() ==
        "t_ns,frame_idx,ch0,ch1,ch2,ch3,ch4,ch5,px,py,pz,qw,qx,qy,qz");
  CHECK(csv::find_schema("calibration")->header() == "channel,open_raw,closed_raw,gain");
  CHECK(csv::find_schema("plan")->header() ==
        "t_ns,cmd0,cmd1,cmd2,cmd3,cmd4,cmd5,px,py,pz,qw,qx,qy,qz");
  CHECK(csv::find_schema("errors")->header() == "t_ns,pos_err,ang_err");
  CHECK(csv::find_schema("wobble")->header() == "px,py,pz,qw,qx,qy,qz,res_d,res_m");
  CHECK(csv::find_schema("nope") == nullptr);
  CHECK(csv::format_real(0.1) == "0.1");
  CHECK(csv::format_real(1.0 / 3.0) == "0.333333333");
  CHECK(csv::format_real(-2.0) == "-2");
}

TEST_CASE("csv parser reports line and column") {
  const auto& s = csv::video_schema();
  CHECK(csv::parse("t_ns,frame_idx\n0,0\n5,1\n", s, "v").size() == 2);
  CHECK(csv::parse("t_ns,frame_idx\n", s, "v").empty());

  auto expect_error = [&](const char* text, std::size_t line, std::size_t column) {
    try {
      (void)csv::parse(text, s, "v.csv");
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(e.file() == "v.csv");
      CHECK(e.line() == line);
      CHECK(e.column() == column);
    }
  };
  expect_error("t_ns,frame\n", 1, 0);
  expect_error("", 1, 0);
  expect_error("t_ns,frame_idx\n0,0\n1,x\n", 3, 2);
  expect_error("t_ns,frame_idx\n0,1.5\n", 2, 2);
  expect_error("t_ns,frame_idx\n0\n", 2, 1);
  expect_error("t_ns,frame_idx\n0,1,2\n", 2, 3);
  expect_error("t_ns,frame_idx\n0,1\n\n", 3, 0);

  const auto rows = csv::parse("px\n", csv::Schema{"x", {{"px", csv::ColumnType::Real}}}, "x");
  CHECK(rows.empty());
}

TEST_CASE("csv files round-trip streams") {
  test::TempDir dir("csv");
  Series<AdcChannels> enc;
  enc.push_back(Timestamp{0}, AdcChannels{0, 1, 2, 3, 4, 4095});
  enc.push_back(Timestamp{1'000'000}, AdcChannels{7, 7, 7, 7, 7, 7});
  csv::write_encoders(dir / "encoders.csv", enc);
  const auto enc2 = csv::read_encoders(dir / "encoders.csv");
  REQUIRE(enc2.size() == 2);
  CHECK(enc2[0].value == enc[0].value);
  CHECK(enc2[1].t == enc[1].t);
  CHECK(test::slurp(dir / "encoders.csv") ==
        "t_ns,ch0,ch1,ch2,ch3,ch4,ch5\n0,0,1,2,3,4,4095\n1000000,7,7,7,7,7,7\n");

  std::mt19937_64 rng(31);
  Series<RigidTransform> poses;
  for (int i = 0; i < 100; ++i) poses.push_back(Timestamp{i * 16'666'667LL}, test::random_transform(rng, 0.9));
  csv::write_poses(dir / "poses.csv", poses);
  const auto poses2 = csv::read_poses(dir / "poses.csv");
  REQUIRE(poses2.size() == poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) {
    CHECK(poses2[i].t == poses[i].t);
    CHECK((poses2[i].value.translation() - poses[i].value.translation()).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((poses2[i].value.rotation().coeffs() - poses[i].value.rotation().coeffs()).cwiseAbs().maxCoeff() <= 1e-8);
  }

  std::ofstream(dir / "bad.csv") << "t_ns,ch0,ch1,ch2,ch3,ch4,ch5\n0,0,0,0,0,0,4096\n";
  CHECK_THROWS_AS(csv::read_encoders(dir / "bad.csv"), SchemaError);
  std::ofstream(dir / "order.csv") << "t_ns,frame_idx\n5,0\n5,1\n";
  CHECK_THROWS_AS(csv::read_video(dir / "order.csv"), SchemaError);
  CHECK_THROWS_AS(csv::read_video(dir / "missing.csv"), IoError);
}

TEST_CASE("synced csv prints integral channels as integers") {
  test::TempDir dir("synced");
  std::vector<SyncedRecord> rows{
      {Timestamp{0}, 0, ChannelValues{1, 2, 3, 4, 5, 4095}, RigidTransform::identity()},
      {Timestamp{33'333'333}, 1, ChannelValues{1.5, 2, 3, 4, 5, 6},
       RigidTransform::from_translation(Vec3(0.1, 0.2, 0.3))}};
  csv::write_synced(dir / "s.csv", rows);
  CHECK(test::slurp(dir / "s.csv") ==
        "t_ns,frame_idx,ch0,ch1,ch2,ch3,ch4,ch5,px,py,pz,qw,qx,qy,qz\n"
        "0,0,1,2,3,4,5,4095,0,0,0,1,0,0,0\n"
        "33333333,1,1.5,2,3,4,5,6,0.1,0.2,0.3,1,0,0,0\n");
  const auto back = csv::read_synced(dir / "s.csv");
  REQUIRE(back.size() == 2);
  CHECK(back[1].channels[0] == 1.5);
  CHECK(back[1].frame_idx == 1);
}

TEST_CASE("key-value config") {
  const auto c = KeyValueConfig::parse(
      "# comment\n a = 1.5 \nname = hello # trailing\nlist = 1, 2 3\nflag = true\npose = 0 0 1 1 0 0 0\n",
      "test.cfg");
  CHECK(c.get_double("a", 0) == 1.5);
  CHECK(c.get_string("name", "") == "hello");
  CHECK(c.get_list("list", 3, {}) == std::vector<double>{1, 2, 3});
  CHECK(c.get_bool("flag", false));
  CHECK(c.get_int("missing", 7) == 7);
  CHECK(c.get_pose("pose", {}).translation().z() == 1.0);
  CHECK_THROWS_AS(c.get_int("a", 0), DataError);
  CHECK_THROWS_AS(c.get_list("list", 2, {}), DataError);
  CHECK_THROWS_AS(c.require_known({"a", "name"}), DataError);
  CHECK_THROWS_AS(KeyValueConfig::parse("a = 1\na = 2\n"), DataError);
  CHECK_THROWS_AS(KeyValueConfig::parse("novalue\n"), DataError);
  CHECK_THROWS_AS(parse_pose_text("1 2 3"), DataError);
  const auto p = parse_pose_text("1,2,3,0,0,0,2");
  CHECK(p.rotation().z() == 1.0);
  CHECK(near_transform(parse_pose_text(format_pose_text(p)), p, 1e-8));
}

}  // TEST_SUITE
