#pragma once

#include <cstdint>
#include <string>

#include "uvms/cooperation.hpp"
#include "uvms/simulation.hpp"

namespace uvms {

/// One agent: kinematic chain, starting arm shape, and joint-space targets
/// for the safety objectives.
struct AgentModel {
  ChainModel chain;
  Eigen::VectorXd q0;
  Eigen::VectorXd q_pref;
  std::vector<JointRange> joint_ranges;
};

/// Gains, bands and priorities of the control-objective stack.
struct ObjectiveSettings {
  double gamma_tool = 0.2;
  double gamma_joint = 0.5;
  double gamma_shape = 0.2;
  double gamma_f = 0.1;
  double gamma_m = 0.1;
  double joint_delta = 0.1;
  double max_tilt = 0.3;
  double tilt_delta = 0.05;
  double shape_threshold = 0.4;
  double shape_delta = 0.1;
  ActivationBand force_band;  // increasing band on the wrench norms
  int priority_joint_limits = 1;
  int priority_attitude = 2;
  int priority_force_torque = 3;
  int priority_tool = 4;
  int priority_shape = 5;
  int priority_last = 6;
};

/// Everything a mission run needs, loaded from one scenario file.
struct Scenario {
  std::string name;

  AgentModel agent_a, agent_b;
  HoleModel hole;
  PegModel peg;
  ContactParams contact;

  double insertion_depth = 0.2;
  /// Injected estimation error of the goal: origin offset in the world frame
  /// and orientation offset (roll-pitch-yaw about the hole axes).
  Eigen::Vector3d goal_error_world = Eigen::Vector3d::Zero();
  Eigen::Vector3d goal_error_rpy = Eigen::Vector3d::Zero();
  /// Vision-style bounded random pose error applied to the estimated hole
  /// pose (norm bounds; 0 disables).
  double vision_lin_error = 0.0;
  double vision_ang_error = 0.0;
  std::uint64_t seed = 1;

  bool change_goal_enabled = false;
  bool force_torque_enabled = false;

  double duration = 120.0;
  double dt = 0.1;

  RegularizationParams regularization;
  VelocityLimits limits;
  double mu0 = 0.1;
  ObjectiveSettings objectives;

  /// Start placement: vector from the initial tip position to the true goal,
  /// expressed in the hole frame, plus a yaw offset of the tip about the
  /// hole-frame z axis.
  Eigen::Vector3d start_offset = Eigen::Vector3d::Zero();
  double start_yaw = 0.0;

  /// Derived by finalize(): initial configurations realizing the start pose.
  SystemConfiguration initial_a, initial_b;

  GoalFrame true_goal() const;
  /// Goal as the controller believes it: true goal plus the injected errors.
  GoalFrame estimated_goal() const;
  Pose start_tip_pose() const;

  /// Computes initial configurations and validates all cross-field
  /// invariants. Called by load_scenario.
  void finalize();
  void validate() const;
};

/// Default arm used by the bundled scenarios: four revolute joints reaching
/// about one metre forward at the preferred shape.
ChainModel default_chain(const Eigen::Vector3d& grasp_offset);

Eigen::VectorXd default_arm_shape();

/// Parses the flat key-value scenario format (see scenarios/*.cfg) and
/// returns a finalized Scenario. Errors carry file and line information.
Scenario load_scenario(const std::string& path);

}  // namespace uvms
