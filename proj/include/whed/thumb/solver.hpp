#pragma once

#include "whed/thumb/model.hpp"

#include <Eigen/Core>

namespace whed::thumb {

struct SolverOptions {
  int max_iterations = 100;
  double residual_tol = 1e-9;     ///< converged when both |res| are below this
  double step_tol = 1e-12;        ///< a step this small means the solver has stalled
  double feasibility_tol = 1e-6;  ///< a stall only counts as converged below this residual
  double jacobian_step = 1e-6;    ///< central-difference step, rad
  double initial_damping = 1e-3;
  /// On failure from q_init, restart from a g x g grid over the joint limits,
  /// nearest starts first. 0 disables.
  int restart_grid = 5;
};

struct SolveResult {
  PassiveThumbState q;
  Residuals residuals;
  int iterations = 0;
};

/// Non-convergence. Carries the best iterate found.
class ThumbSolveError : public NumericalError {
 public:
  ThumbSolveError(const std::string& what, const PassiveThumbState& best, const Residuals& residuals);
  const PassiveThumbState& best() const noexcept { return best_; }
  const Residuals& residuals() const noexcept { return residuals_; }

 private:
  PassiveThumbState best_;
  Residuals residuals_;
};

/// d(res_d, res_m) / d(theta2, theta4) by central differences.
Eigen::Matrix2d residual_jacobian(const RigidTransform& body, const PassiveThumbState& q,
                                  const ThumbCouplingModel& model, double h = 1e-6);

/// Recovers the passive-thumb joints from the exoskeleton body pose by
/// Levenberg-damped Gauss-Newton on the two linkage residuals. Iterates are
/// kept inside the joint limits. A stalled descent is retried from the
/// restart grid; the first start that converges wins. Throws JointLimitError for q_init outside the
/// limits and ThumbSolveError when no solution is reached.
SolveResult solve_passive_thumb(const ExoPose& exo, const ThumbCouplingModel& model,
                                const PassiveThumbState& q_init, const SolverOptions& options = {});

}  // namespace whed::thumb
