#pragma once

#include <optional>
#include <vector>

#include "uvms/algebra.hpp"

namespace uvms {

enum class TaskKind { equality, inequality, non_reactive };

/// One priority level: reference rate, task Jacobian, activation diagonal.
/// Equality and non-reactive tasks must carry identity activation.
struct TaskSpec {
  int priority = 1;
  Eigen::VectorXd reference;
  Eigen::MatrixXd jacobian;
  Eigen::VectorXd activation;
  TaskKind kind = TaskKind::equality;

  int dimension() const { return static_cast<int>(reference.size()); }

  void validate(int n) const {
    if (jacobian.rows() != dimension() || activation.size() != dimension())
      throw ContractViolation("TaskSpec: reference, jacobian rows and activation must agree");
    if (jacobian.cols() != n)
      throw ContractViolation("TaskSpec: jacobian has " + std::to_string(jacobian.cols()) +
                              " columns, expected " + std::to_string(n));
    if (kind != TaskKind::inequality && (activation.array() != 1.0).any())
      throw ContractViolation("TaskSpec: equality and non-reactive tasks require identity activation");
    if ((activation.array() < 0.0).any() || (activation.array() > 1.0).any())
      throw ContractViolation("TaskSpec: activation entries must lie in [0, 1]");
  }
};

/// Prioritized list of control objectives over an n-dimensional velocity.
/// Tasks sharing a priority value are stacked into one level before solving.
struct ActionList {
  std::vector<TaskSpec> tasks;
  int n = 0;

  void validate() const {
    if (n <= 0) throw ContractViolation("ActionList: n must be positive");
    for (const auto& t : tasks) t.validate(n);
  }
};

/// Per-level residual norms ||A_k (xbar_k - J_k rho_k)|| after the level
/// update, and rank estimates of the projected task Jacobians.
struct SolverDiagnostics {
  std::vector<double> residuals;
  std::vector<int> ranks;
};

struct SolveResult {
  Eigen::VectorXd velocity;
  SolverDiagnostics diagnostics;

  SystemVelocity system_velocity() const {
    return SystemVelocity::from_vector(velocity, static_cast<int>(velocity.size()) - 6);
  }
};

/// Prioritized task solver. Starting from rho_0 = 0, Q_0 = I, each level
/// applies the regularized task pseudoinverse to J_k Q_{k-1}, accumulates a
/// saturated velocity update, and shrinks the null-space projector so lower
/// levels cannot disturb higher ones. Returns rho_N with diagnostics.
SolveResult icat_solve(const ActionList& action, const RegularizationParams& params,
                       const VelocityLimits& limits);

/// Task that reproduces an externally chosen velocity without feedback.
TaskSpec make_nonreactive_task(const Eigen::VectorXd& reference, const Eigen::MatrixXd& jacobian,
                               int priority);

/// Arm-vehicle coordination with two parallel solver runs. The first solves
/// the action over the full system and keeps only the vehicle twist; the
/// second re-solves with a top-priority non-reactive lock of the vehicle
/// components to the measured vehicle velocity and keeps only the joint
/// rates. With no measurement supplied the first run's vehicle output is
/// used. The action must not already contain a vehicle-lock task.
Eigen::VectorXd coordinate_arm_vehicle(const ActionList& action,
                                       const std::optional<Vector6d>& measured_vehicle_velocity,
                                       const RegularizationParams& params,
                                       const VelocityLimits& limits);

}  // namespace uvms
