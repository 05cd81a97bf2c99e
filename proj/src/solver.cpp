#include "uvms/solver.hpp"

#include <algorithm>
#include <map>

namespace uvms {

namespace {

/// Tasks sharing a priority value are stacked into one level.
std::vector<TaskSpec> stack_levels(const ActionList& action) {
  std::map<int, std::vector<const TaskSpec*>> by_priority;
  for (const auto& t : action.tasks) by_priority[t.priority].push_back(&t);

  std::vector<TaskSpec> levels;
  levels.reserve(by_priority.size());
  for (const auto& [priority, group] : by_priority) {
    int rows = 0;
    for (const auto* t : group) rows += t->dimension();
    TaskSpec level;
    level.priority = priority;
    level.reference.resize(rows);
    level.jacobian.resize(rows, action.n);
    level.activation.resize(rows);
    int r = 0;
    for (const auto* t : group) {
      level.reference.segment(r, t->dimension()) = t->reference;
      level.jacobian.middleRows(r, t->dimension()) = t->jacobian;
      level.activation.segment(r, t->dimension()) = t->activation;
      r += t->dimension();
    }
    levels.push_back(std::move(level));
  }
  return levels;
}

}  // namespace

SolveResult icat_solve(const ActionList& action, const RegularizationParams& params,
                       const VelocityLimits& limits) {
  action.validate();
  params.validate();
  const int n = action.n;
  const Eigen::VectorXd bounds = limits.bound_vector(n);

  SolveResult result;
  result.velocity = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd q_proj = Eigen::MatrixXd::Identity(n, n);

  const std::vector<TaskSpec> levels = stack_levels(action);
  int level_index = 0;
  for (const auto& level : levels) {
    ++level_index;
    const Eigen::MatrixXd jq = level.jacobian * q_proj;
    const Eigen::MatrixXd pinv_q =
        regularized_pinv(jq, level.activation, q_proj, params);
    const Eigen::MatrixXd pinv_i = regularized_pinv(
        jq, level.activation, Eigen::MatrixXd::Identity(n, n), params);

    const Eigen::MatrixXd w = jq * pinv_q;
    const Eigen::VectorXd increment =
        q_proj * pinv_i * w * (level.reference - level.jacobian * result.velocity);
    result.velocity += saturate_update(result.velocity, increment, bounds);
    q_proj = q_proj * (Eigen::MatrixXd::Identity(n, n) - pinv_i * jq);

    if (!result.velocity.allFinite() || !q_proj.allFinite())
      throw NumericalError("icat_solve: non-finite value at level " + std::to_string(level_index));

    result.diagnostics.residuals.push_back(
        (level.activation.asDiagonal() * (level.reference - level.jacobian * result.velocity))
            .norm());
    const Eigen::VectorXd sv =
        Eigen::JacobiSVD<Eigen::MatrixXd>(level.activation.asDiagonal() * jq).singularValues();
    result.diagnostics.ranks.push_back(
        static_cast<int>((sv.array() > params.sv_threshold).count()));
  }
  return result;
}

TaskSpec make_nonreactive_task(const Eigen::VectorXd& reference, const Eigen::MatrixXd& jacobian,
                               int priority) {
  if (jacobian.rows() != reference.size())
    throw ContractViolation("make_nonreactive_task: reference length must match jacobian rows");
  TaskSpec t;
  t.priority = priority;
  t.reference = reference;
  t.jacobian = jacobian;
  t.activation = Eigen::VectorXd::Ones(reference.size());
  t.kind = TaskKind::non_reactive;
  return t;
}

Eigen::VectorXd coordinate_arm_vehicle(const ActionList& action,
                                       const std::optional<Vector6d>& measured_vehicle_velocity,
                                       const RegularizationParams& params,
                                       const VelocityLimits& limits) {
  action.validate();
  if (action.n < 6)
    throw ContractViolation("coordinate_arm_vehicle: action must span at least the vehicle DOFs");
  const int l = action.n - 6;

  const Eigen::VectorXd full = icat_solve(action, params, limits).velocity;
  const Vector6d vehicle = full.tail<6>();
  const Vector6d measured = measured_vehicle_velocity.value_or(vehicle);

  Eigen::MatrixXd lock = Eigen::MatrixXd::Zero(6, action.n);
  lock.rightCols<6>().setIdentity();
  int top_priority = 0;
  for (const auto& t : action.tasks) top_priority = std::min(top_priority, t.priority - 1);

  ActionList locked = action;
  locked.tasks.insert(locked.tasks.begin(), make_nonreactive_task(measured, lock, top_priority));
  const Eigen::VectorXd arm_run = icat_solve(locked, params, limits).velocity;

  Eigen::VectorXd merged(action.n);
  merged.head(l) = arm_run.head(l);
  merged.tail<6>() = vehicle;
  return merged;
}

}  // namespace uvms
