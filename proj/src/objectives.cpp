#include "uvms/objectives.hpp"

namespace uvms {

TaskSpec joint_limits_task(const Eigen::VectorXd& q, const std::vector<JointRange>& limits,
                           double delta, double gamma, int priority, int n) {
  const int l = static_cast<int>(q.size());
  if (static_cast<int>(limits.size()) != l)
    throw ContractViolation("joint_limits_task: one range per joint required");
  if (!(gamma > 0.0)) throw ContractViolation("joint_limits_task: gamma must be > 0");

  TaskSpec t;
  t.priority = priority;
  t.kind = TaskKind::inequality;
  t.reference.resize(l);
  t.activation.resize(l);
  t.jacobian = Eigen::MatrixXd::Zero(l, n);
  for (int i = 0; i < l; ++i) {
    if (!(limits[i].min < limits[i].max))
      throw ContractViolation("joint_limits_task: range " + std::to_string(i) + " is empty");
    ActivationBand band;
    band.lower = limits[i].min;
    band.upper = limits[i].max;
    band.delta = delta;
    t.activation(i) = activation_scalar(q(i), band);
    const double target = q(i) - limits[i].min < limits[i].max - q(i)
                              ? limits[i].min + delta
                              : limits[i].max - delta;
    t.reference(i) = gamma * (target - q(i));
    t.jacobian(i, i) = 1.0;
  }
  return t;
}

TaskSpec horizontal_attitude_task(const Eigen::Vector3d& eta2, double max_tilt, double delta,
                                  double gamma, int priority, int n) {
  if (!(max_tilt > 0.0) || !(max_tilt < M_PI_2))
    throw ContractViolation("horizontal_attitude_task: max_tilt must lie in (0, pi/2)");
  const double tilt = eta2.head<2>().norm();

  TaskSpec t;
  t.priority = priority;
  t.kind = TaskKind::inequality;
  t.reference = Eigen::VectorXd::Constant(1, -gamma * tilt);
  t.jacobian = Eigen::MatrixXd::Zero(1, n);
  ActivationBand band;
  band.upper = max_tilt;
  band.delta = delta;
  t.activation = Eigen::VectorXd::Constant(1, activation_scalar(tilt, band));

  if (tilt > 1e-12) {
    // d/dt ||(roll, pitch)|| through the roll/pitch rows of the rate matrix,
    // acting on the body-frame angular velocity (last three columns).
    const Eigen::RowVector2d grad = eta2.head<2>().transpose() / tilt;
    t.jacobian.block<1, 3>(0, n - 3) = grad * rpy_rate_matrix(eta2).topRows<2>();
  }
  return t;
}

TaskSpec tool_position_task(const Pose& current, const Pose& goal, const Eigen::MatrixXd& tool_jac,
                            double gamma, int priority) {
  if (tool_jac.rows() != 6) throw ContractViolation("tool_position_task: jacobian must have 6 rows");
  if (!(gamma > 0.0)) throw ContractViolation("tool_position_task: gamma must be > 0");
  TaskSpec t;
  t.priority = priority;
  t.kind = TaskKind::equality;
  t.reference = gamma * pose_error(current, goal);
  t.jacobian = tool_jac;
  t.activation = Eigen::VectorXd::Ones(6);
  return t;
}

TaskSpec preferred_shape_task(const Eigen::VectorXd& q, const Eigen::VectorXd& q_pref,
                              double threshold, double delta, double gamma, int priority, int n) {
  const int l = static_cast<int>(q.size());
  if (q_pref.size() != l) throw ContractViolation("preferred_shape_task: q_pref must match q");
  TaskSpec t;
  t.priority = priority;
  t.kind = TaskKind::inequality;
  t.reference = gamma * (q_pref - q);
  t.jacobian = Eigen::MatrixXd::Zero(l, n);
  t.activation.resize(l);
  ActivationBand band;
  band.upper = threshold;
  band.delta = delta;
  for (int i = 0; i < l; ++i) {
    t.activation(i) = activation_scalar(std::abs(q(i) - q_pref(i)), band);
    t.jacobian(i, i) = 1.0;
  }
  return t;
}

TaskSpec force_torque_task(const Wrench& wrench, const Eigen::MatrixXd& tool_jac, double gamma_f,
                           double gamma_m, const ActivationBand& band, int priority) {
  wrench.validate();
  if (tool_jac.rows() != 6) throw ContractViolation("force_torque_task: jacobian must have 6 rows");
  if (!(gamma_f > 0.0 && gamma_f < 1.0) || !(gamma_m > 0.0 && gamma_m < 1.0))
    throw ContractViolation("force_torque_task: gains must lie in (0, 1)");

  const int n = static_cast<int>(tool_jac.cols());
  TaskSpec t;
  t.priority = priority;
  t.kind = TaskKind::inequality;
  t.reference = Eigen::VectorXd::Zero(2);
  t.jacobian = Eigen::MatrixXd::Zero(2, n);
  t.activation = Eigen::VectorXd::Zero(2);

  const double fn = wrench.f.norm();
  const double guard = std::max(band.epsilon, 1e-12);
  if (fn > guard) {
    t.reference(0) = -gamma_f * fn;
    t.jacobian.row(0) = (-wrench.f / fn).transpose() * tool_jac.topRows<3>();
    t.activation(0) = activation_scalar(fn, band);
  }
  const double mn = wrench.m.norm();
  if (mn > guard) {
    t.reference(1) = -gamma_m * mn;
    t.jacobian.row(1) = (-wrench.m / mn).transpose() * tool_jac.bottomRows<3>();
    t.activation(1) = activation_scalar(mn, band);
  }
  return t;
}

TaskSpec last_task(int n, int priority) {
  TaskSpec t;
  t.priority = priority;
  t.kind = TaskKind::equality;
  t.reference = Eigen::VectorXd::Zero(n);
  t.jacobian = Eigen::MatrixXd::Identity(n, n);
  t.activation = Eigen::VectorXd::Ones(n);
  return t;
}

}  // namespace uvms
