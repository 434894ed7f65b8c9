#include "whed/thumb/wobble.hpp"

#include "whed/core/angles.hpp"
#include "whed/core/csv.hpp"

#include <fmt/format.h>

#include <Eigen/Geometry>
#include <Eigen/LU>

#include <cmath>
#include <random>

namespace whed::thumb {

namespace {

constexpr int kConstructionAttempts = 1000;
constexpr std::size_t kMinAttemptsBeforeRateCheck = 20;

std::mt19937_64 make_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x7701u};
  return std::mt19937_64(seq);
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  for (;;) {
    const Vec3 v(n(rng), n(rng), n(rng));
    if (v.norm() > 1e-6) return v.normalized();
  }
}

Vec3 any_perpendicular(const Vec3& v) {
  const Vec3 a = std::abs(v.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  return v.cross(a).normalized();
}

double separation(const RigidTransform& a, const RigidTransform& b, double rotation_scale) {
  return std::max((a.translation() - b.translation()).norm(),
                  rotation_scale * geodesic_angle(a.rotation(), b.rotation()));
}

}  // namespace

RigidTransform forward_construct_exo_pose(const PassiveThumbState& q, const ThumbCouplingModel& m,
                                          std::uint64_t seed) {
  const AttachmentPoints r = attachment_points(q, m);
  const Vec3 span_e = m.exo_meta_point - m.exo_distal_point;
  const double s = span_e.norm();
  if (!(s > 0.0)) throw DataError("exoskeleton attachment points coincide");
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> twist(-kPi, kPi);

  for (int attempt = 0; attempt < kConstructionAttempts; ++attempt) {
    const Vec3 e_d = r.distal + m.link_distal * random_unit(rng);
    // e_m lies on sphere(r_m, L_m) and on sphere(e_d, s).
    const Vec3 between = e_d - r.metacarpal;
    const double d = between.norm();
    if (d > m.link_meta + s || d < std::abs(m.link_meta - s) || d == 0.0) continue;
    const Vec3 n = between / d;
    const double a = (d * d + m.link_meta * m.link_meta - s * s) / (2.0 * d);
    const double h = std::sqrt(std::max(0.0, m.link_meta * m.link_meta - a * a));
    const Vec3 u = any_perpendicular(n);
    const Vec3 w = n.cross(u);
    const double gamma = twist(rng);
    const Vec3 e_m = r.metacarpal + a * n + h * (std::cos(gamma) * u + std::sin(gamma) * w);

    const Vec3 span_b = e_m - e_d;
    const Eigen::Matrix3d align =
        Eigen::Quaterniond::FromTwoVectors(span_e, span_b).toRotationMatrix();
    const Eigen::Matrix3d rot = Eigen::AngleAxisd(twist(rng), span_b.normalized()).toRotationMatrix() * align;
    const Quaternion qr = Quaternion::from_matrix(rot);
    return RigidTransform(qr, e_d - qr.rotate(m.exo_distal_point));
  }
  throw DataError(fmt::format(
      "no exoskeleton pose satisfies both linkages at theta2 = {}, theta4 = {}", q.theta2, q.theta4));
}

std::optional<RigidTransform> project_to_constraints(const RigidTransform& body,
                                                     const PassiveThumbState& q,
                                                     const ThumbCouplingModel& m,
                                                     const ProjectionOptions& options) {
  const AttachmentPoints r = attachment_points_unchecked(q, m);
  const Vec3 p[2] = {m.exo_distal_point, m.exo_meta_point};
  const Vec3 target[2] = {r.distal, r.metacarpal};
  const double length[2] = {m.link_distal, m.link_meta};

  RigidTransform t = body;
  for (int it = 0; it <= options.max_iterations; ++it) {
    Eigen::Vector2d res;
    Eigen::Matrix<double, 2, 6> j;
    for (int k = 0; k < 2; ++k) {
      const Vec3 diff = t.apply(p[k]) - target[k];
      const double norm = diff.norm();
      if (!(norm > 1e-12)) return std::nullopt;
      const Vec3 u = diff / norm;
      res[k] = norm - length[k];
      j.block<1, 3>(k, 0) = u.transpose();
      j.block<1, 3>(k, 3) = p[k].cross(t.rotation().conjugate().rotate(u)).transpose();
    }
    if (res.cwiseAbs().maxCoeff() < options.tol) return t;
    if (it == options.max_iterations) break;
    const Eigen::Matrix2d jjt = j * j.transpose();
    if (std::abs(jjt.determinant()) < 1e-24) return std::nullopt;
    const Eigen::Matrix<double, 6, 1> dx = -j.transpose() * jjt.lu().solve(res);
    t = RigidTransform(t.rotation() * Quaternion::exp(dx.tail<3>()), t.translation() + dx.head<3>());
  }
  return std::nullopt;
}

std::vector<RigidTransform> sample_wobble_space(const PassiveThumbState& q,
                                                const ThumbCouplingModel& m, std::size_t n,
                                                const WobbleOptions& options) {
  std::vector<RigidTransform> out;
  if (n == 0) return out;
  const RigidTransform start =
      options.start ? *options.start : forward_construct_exo_pose(q, m, options.seed);
  if (constraint_residual(start, q, m).max_abs() >= options.tol) {
    throw DataError("wobble start pose does not satisfy the linkage constraints");
  }
  out.reserve(n);
  out.push_back(start);

  auto rng = make_rng(options.seed ^ 0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> dt(0.0, options.translation_step);
  std::normal_distribution<double> dr(0.0, options.rotation_step);
  const ProjectionOptions proj{options.tol, 50};

  std::size_t attempts = 0;
  std::size_t failures = 0;
  const std::size_t max_attempts = 200 * n + 1000;
  RigidTransform current = start;
  while (out.size() < n) {
    if (attempts >= max_attempts) {
      throw NumericalError(fmt::format(
          "wobble sampler produced {} of {} distinct samples in {} proposals; try a larger step size",
          out.size(), n, attempts));
    }
    ++attempts;
    const Vec3 v(dt(rng), dt(rng), dt(rng));
    const Vec3 w(dr(rng), dr(rng), dr(rng));
    const RigidTransform proposal(current.rotation() * Quaternion::exp(w), current.translation() + v);
    const auto projected = project_to_constraints(proposal, q, m, proj);
    if (!projected) {
      ++failures;
      if (attempts >= kMinAttemptsBeforeRateCheck && 2 * failures > attempts) {
        throw NumericalError(fmt::format(
            "wobble projection failed for {} of {} proposals; use a smaller step size", failures,
            attempts));
      }
      continue;
    }
    bool distinct = true;
    for (const auto& s : out) {
      if (separation(s, *projected, options.rotation_scale) < options.min_separation) {
        distinct = false;
        break;
      }
    }
    if (!distinct) continue;
    out.push_back(*projected);
    current = *projected;
  }
  return out;
}

void write_wobble_csv(const std::filesystem::path& path, std::span<const RigidTransform> samples,
                      const PassiveThumbState& q, const ThumbCouplingModel& model) {
  csv::Writer w(path, *csv::find_schema("wobble"));
  for (const auto& s : samples) {
    auto fields = csv::pose_fields(s);
    const Residuals r = constraint_residual(s, q, model);
    fields.push_back(csv::format_real(r.distal));
    fields.push_back(csv::format_real(r.metacarpal));
    w.write_row(fields);
  }
  w.close();
}

}  // namespace whed::thumb
