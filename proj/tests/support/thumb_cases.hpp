#pragma once

// Seeded (q*, T_E, q_init) triples for solver recovery checks.
//
// A case is kept only when T_E pins down q*: the residual Jacobian at q* is
// well conditioned, and no other root of the two linkage equations lies
// inside the joint limits. Otherwise a different posture with the same T_E is
// an equally valid answer.

#include "whed/thumb/model.hpp"
#include "whed/thumb/wobble.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <optional>
#include <random>
#include <vector>

namespace whed::test {

struct ThumbCase {
  thumb::PassiveThumbState truth;
  thumb::PassiveThumbState init;
  RigidTransform body;
};

inline constexpr double kThumbPerturbation = 0.2;  // rad, per joint
inline constexpr double kMinSingularValue = 2e-3;  // m/rad; 1e-9 m residual -> 5e-7 rad

inline Eigen::Vector2d residual_vec(const RigidTransform& body, const thumb::PassiveThumbState& q,
                                    const thumb::ThumbCouplingModel& m) {
  const auto r = thumb::constraint_residual(body, q, m);
  return {r.distal, r.metacarpal};
}

// Forward differences at a coarse step; independent of the solver's Jacobian.
inline Eigen::Matrix2d coarse_jacobian(const RigidTransform& body, const thumb::PassiveThumbState& q,
                                       const thumb::ThumbCouplingModel& m) {
  const double h = 1e-7;
  const Eigen::Vector2d r0 = residual_vec(body, q, m);
  Eigen::Matrix2d j;
  j.col(0) = (residual_vec(body, {q.theta2 + h, q.theta4}, m) - r0) / h;
  j.col(1) = (residual_vec(body, {q.theta2, q.theta4 + h}, m) - r0) / h;
  return j;
}

// Plain Newton from a grid minimum; returns a root if one is reached.
inline std::optional<thumb::PassiveThumbState> newton_root(const RigidTransform& body,
                                                           thumb::PassiveThumbState q,
                                                           const thumb::ThumbCouplingModel& m) {
  for (int it = 0; it < 40; ++it) {
    const Eigen::Vector2d r = residual_vec(body, q, m);
    if (r.cwiseAbs().maxCoeff() < 1e-11) return q;
    const Eigen::Vector2d d = coarse_jacobian(body, q, m).colPivHouseholderQr().solve(-r);
    if (!d.allFinite()) return std::nullopt;
    q.theta2 += d[0];
    q.theta4 += d[1];
  }
  return std::nullopt;
}

inline bool identifiable(const RigidTransform& body, const thumb::PassiveThumbState& q,
                         const thumb::ThumbCouplingModel& m) {
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(coarse_jacobian(body, q, m));
  if (svd.singularValues()[1] < kMinSingularValue) return false;

  // Any other exact root inside the joint limits makes q ambiguous for this T_E.
  // Newton is seeded from every row-wise and column-wise minimum of the grid
  // cost, which keeps narrow valleys holding two roots from hiding one.
  const auto& lim = m.limits;
  constexpr double kStep = 0.02;
  const int n2 = static_cast<int>(std::ceil((lim.theta2_max - lim.theta2_min) / kStep)) + 1;
  const int n4 = static_cast<int>(std::ceil((lim.theta4_max - lim.theta4_min) / kStep)) + 1;
  auto at = [&](int i, int j) -> thumb::PassiveThumbState {
    return {std::min(lim.theta2_min + i * kStep, lim.theta2_max),
            std::min(lim.theta4_min + j * kStep, lim.theta4_max)};
  };
  std::vector<double> cost(static_cast<std::size_t>(n2 * n4));
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n4; ++j) cost[i * n4 + j] = residual_vec(body, at(i, j), m).squaredNorm();
  auto c = [&](int i, int j) {
    return (i < 0 || i >= n2 || j < 0 || j >= n4) ? INFINITY : cost[i * n4 + j];
  };
  for (int i = 0; i < n2; ++i) {
    for (int j = 0; j < n4; ++j) {
      const double here = c(i, j);
      const bool row_min = here <= c(i, j - 1) && here <= c(i, j + 1);
      const bool col_min = here <= c(i - 1, j) && here <= c(i + 1, j);
      if (!row_min && !col_min) continue;
      const auto root = newton_root(body, at(i, j), m);
      if (!root || !lim.contains(*root)) continue;
      if (std::hypot(root->theta2 - q.theta2, root->theta4 - q.theta4) > 1e-6) return false;
    }
  }
  return true;
}

/// Draws until `count` identifiable cases are found; `rejected` counts the rest.
inline std::vector<ThumbCase> make_thumb_cases(std::size_t count, std::uint64_t seed,
                                               const thumb::ThumbCouplingModel& m,
                                               std::size_t* rejected = nullptr) {
  std::mt19937_64 rng(seed);
  const auto& lim = m.limits;
  const double margin = kThumbPerturbation;
  std::uniform_real_distribution<double> t2(lim.theta2_min + margin, lim.theta2_max - margin);
  std::uniform_real_distribution<double> t4(lim.theta4_min + margin, lim.theta4_max - margin);
  std::bernoulli_distribution sign(0.5);
  std::vector<ThumbCase> out;
  std::size_t skipped = 0;
  while (out.size() < count) {
    const thumb::PassiveThumbState q{t2(rng), t4(rng)};
    RigidTransform body;
    try {
      body = thumb::forward_construct_exo_pose(q, m, rng());
    } catch (const std::exception&) {
      ++skipped;
      continue;
    }
    if (!identifiable(body, q, m)) {
      ++skipped;
      continue;
    }
    const double d2 = sign(rng) ? kThumbPerturbation : -kThumbPerturbation;
    const double d4 = sign(rng) ? kThumbPerturbation : -kThumbPerturbation;
    out.push_back({q, {q.theta2 + d2, q.theta4 + d4}, body});
  }
  if (rejected) *rejected = skipped;
  return out;
}

}  // namespace whed::test
