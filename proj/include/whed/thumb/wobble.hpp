#pragma once

#include "whed/thumb/model.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace whed::thumb {

/// A body pose T_E that satisfies both linkage constraints exactly for q,
/// built from seeded random choices of the free directions. Throws DataError
/// when the geometry admits no such pose.
RigidTransform forward_construct_exo_pose(const PassiveThumbState& q, const ThumbCouplingModel& model,
                                          std::uint64_t seed);

struct ProjectionOptions {
  double tol = 1e-9;
  int max_iterations = 50;
};

/// Minimum-norm Gauss-Newton projection of `body` onto the constraint set for
/// fixed q, over a right perturbation (translation, rotation vector) of the
/// pose. Returns nothing if it fails to reach the tolerance.
std::optional<RigidTransform> project_to_constraints(const RigidTransform& body,
                                                     const PassiveThumbState& q,
                                                     const ThumbCouplingModel& model,
                                                     const ProjectionOptions& options = {});

struct WobbleOptions {
  double tol = 1e-9;
  std::uint64_t seed = 1;
  double translation_step = 0.002;  ///< proposal std per axis, m
  double rotation_step = 0.05;      ///< proposal std per axis, rad
  /// Samples closer than this are rejected; distance is
  /// max(|dp|, rotation_scale * angle).
  double min_separation = 1e-4;
  double rotation_scale = 0.05;     ///< m per rad
  std::optional<RigidTransform> start;  ///< defaults to a forward-constructed pose
};

/// n distinct body poses on the wobble space of q: a random walk whose
/// proposals are projected back onto the constraints. Throws NumericalError
/// when more than half of the projections fail.
std::vector<RigidTransform> sample_wobble_space(const PassiveThumbState& q,
                                                const ThumbCouplingModel& model, std::size_t n,
                                                const WobbleOptions& options = {});

/// CSV `px,py,pz,qw,qx,qy,qz,res_d,res_m`, residuals re-evaluated per row.
void write_wobble_csv(const std::filesystem::path& path, std::span<const RigidTransform> samples,
                      const PassiveThumbState& q, const ThumbCouplingModel& model);

}  // namespace whed::thumb
