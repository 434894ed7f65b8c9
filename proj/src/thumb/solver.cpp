#include "whed/thumb/solver.hpp"

#include <fmt/format.h>

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace whed::thumb {

namespace {

Eigen::Vector2d as_vector(const Residuals& r) { return {r.distal, r.metacarpal}; }

}  // namespace

ThumbSolveError::ThumbSolveError(const std::string& what, const PassiveThumbState& best,
                                 const Residuals& residuals)
    : NumericalError(fmt::format("{} (best theta2 = {:.9g}, theta4 = {:.9g}; res_d = {:.3g} m, "
                                 "res_m = {:.3g} m)",
                                 what, best.theta2, best.theta4, residuals.distal,
                                 residuals.metacarpal)),
      best_(best),
      residuals_(residuals) {}

Eigen::Matrix2d residual_jacobian(const RigidTransform& body, const PassiveThumbState& q,
                                  const ThumbCouplingModel& model, double h) {
  Eigen::Matrix2d j;
  for (int col = 0; col < 2; ++col) {
    PassiveThumbState plus = q;
    PassiveThumbState minus = q;
    double& p = col == 0 ? plus.theta2 : plus.theta4;
    double& m = col == 0 ? minus.theta2 : minus.theta4;
    p += h;
    m -= h;
    j.col(col) = (as_vector(constraint_residual(body, plus, model)) -
                  as_vector(constraint_residual(body, minus, model))) /
                 (2.0 * h);
  }
  return j;
}

namespace {

struct Descent {
  SolveResult result;
  bool converged = false;
  std::string failure;
};

Descent descend(const ExoPose& exo, const ThumbCouplingModel& model, const PassiveThumbState& q_init,
                const SolverOptions& options) {
  PassiveThumbState q = q_init;
  Residuals res = constraint_residual(exo.body, q, model);
  double cost = as_vector(res).squaredNorm();
  double lambda = options.initial_damping;

  for (int it = 0; it < options.max_iterations; ++it) {
    if (res.max_abs() < options.residual_tol) return {{q, res, it}, true, {}};

    const Eigen::Matrix2d j = residual_jacobian(exo.body, q, model, options.jacobian_step);
    const Eigen::Vector2d r = as_vector(res);
    const Eigen::Matrix2d a = j.transpose() * j + lambda * Eigen::Matrix2d::Identity();
    const Eigen::Vector2d delta = a.lu().solve(-j.transpose() * r);

    const PassiveThumbState trial =
        model.limits.clamp({q.theta2 + delta[0], q.theta4 + delta[1]});
    const double step = std::hypot(trial.theta2 - q.theta2, trial.theta4 - q.theta4);
    if (!(step >= options.step_tol)) {
      if (res.max_abs() < options.feasibility_tol) return {{q, res, it}, true, {}};
      return {{q, res, it}, false, "stalled away from a solution"};
    }

    const Residuals trial_res = constraint_residual(exo.body, trial, model);
    const double trial_cost = as_vector(trial_res).squaredNorm();
    if (trial_cost < cost) {
      q = trial;
      res = trial_res;
      cost = trial_cost;
      lambda /= 10.0;
    } else {
      lambda *= 10.0;
    }
  }
  const bool ok = res.max_abs() < options.residual_tol;
  return {{q, res, options.max_iterations},
          ok,
          ok ? std::string{} : fmt::format("did not converge in {} iterations", options.max_iterations)};
}

std::vector<PassiveThumbState> restart_points(const JointLimits& lim, int g, const PassiveThumbState& from) {
  std::vector<PassiveThumbState> pts;
  for (int i = 0; i < g; ++i) {
    for (int k = 0; k < g; ++k) {
      const double u = g == 1 ? 0.5 : static_cast<double>(i) / (g - 1);
      const double v = g == 1 ? 0.5 : static_cast<double>(k) / (g - 1);
      pts.push_back({lim.theta2_min + u * (lim.theta2_max - lim.theta2_min),
                     lim.theta4_min + v * (lim.theta4_max - lim.theta4_min)});
    }
  }
  auto dist = [&](const PassiveThumbState& p) {
    return std::hypot(p.theta2 - from.theta2, p.theta4 - from.theta4);
  };
  std::stable_sort(pts.begin(), pts.end(),
                   [&](const auto& a, const auto& b) { return dist(a) < dist(b); });
  return pts;
}

}  // namespace

SolveResult solve_passive_thumb(const ExoPose& exo, const ThumbCouplingModel& model,
                                const PassiveThumbState& q_init, const SolverOptions& options) {
  (void)attachment_points(q_init, model);  // limit check

  Descent first = descend(exo, model, q_init, options);
  if (first.converged) return first.result;

  SolveResult best = first.result;
  int iterations = first.result.iterations;
  for (const auto& start : restart_points(model.limits, options.restart_grid, q_init)) {
    Descent d = descend(exo, model, start, options);
    iterations += d.result.iterations;
    if (d.converged) {
      d.result.iterations = iterations;
      return d.result;
    }
    if (d.result.residuals.max_abs() < best.residuals.max_abs()) best = d.result;
  }
  throw ThumbSolveError(fmt::format("thumb solver {} from the initial guess and {} restarts",
                                    first.failure, options.restart_grid * options.restart_grid),
                        best.q, best.residuals);
}

}  // namespace whed::thumb
