#pragma once

#include "uvms/kinematics.hpp"
#include "uvms/solver.hpp"

namespace uvms {

/// Contact wrench measured at the tool, expressed in the tool frame.
struct Wrench {
  Eigen::Vector3d f = Eigen::Vector3d::Zero();
  Eigen::Vector3d m = Eigen::Vector3d::Zero();

  void validate() const {
    if (!f.allFinite() || !m.allFinite()) throw ContractViolation("Wrench: non-finite components");
  }

  bool is_zero(double tol = 0.0) const { return f.norm() <= tol && m.norm() <= tol; }
};

/// Per-joint position range.
struct JointRange {
  double min = 0.0;
  double max = 0.0;
};

/// Inequality task keeping every joint inside its mechanical range. One row
/// per joint selecting that joint among the n system DOFs; the reference
/// drives the joint back to the interior edge of the transition band with
/// rate gamma.
TaskSpec joint_limits_task(const Eigen::VectorXd& q, const std::vector<JointRange>& limits,
                           double delta, double gamma, int priority, int n);

/// Scalar inequality task on the vehicle tilt ||(roll, pitch)||. Activates as
/// the tilt approaches max_tilt and drives it back to zero. Only the angular
/// vehicle columns are populated.
TaskSpec horizontal_attitude_task(const Eigen::Vector3d& eta2, double max_tilt, double delta,
                                  double gamma, int priority, int n);

/// 6-dim equality task moving the tool toward the goal pose with proportional
/// rate gamma on the pose error.
TaskSpec tool_position_task(const Pose& current, const Pose& goal, const Eigen::MatrixXd& tool_jac,
                            double gamma, int priority);

/// Per-joint inequality task pulling the arm toward a preferred shape once a
/// joint strays more than `threshold` from it.
TaskSpec preferred_shape_task(const Eigen::VectorXd& q, const Eigen::VectorXd& q_pref,
                              double threshold, double delta, double gamma, int priority, int n);

/// 2-dim task reducing the norms of the measured contact force and torque.
/// References (-gamma_f ||f||, -gamma_m ||m||); rows project the tool twist
/// onto the directions opposing f and m. Rows whose norm lies at or below
/// band.epsilon are zeroed and deactivated.
TaskSpec force_torque_task(const Wrench& wrench, const Eigen::MatrixXd& tool_jac, double gamma_f,
                           double gamma_m, const ActivationBand& band, int priority);

/// Minimum-norm damping task placed at the lowest priority to absorb any
/// left-over null space and keep the output continuous.
TaskSpec last_task(int n, int priority);

}  // namespace uvms
