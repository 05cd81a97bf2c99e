#pragma once

#include "uvms/scenario.hpp"
#include "uvms/solver.hpp"

namespace uvms {

enum class MissionStatus { success, external_contact, singularity, timeout };

std::string to_string(MissionStatus status);

/// Everything logged for one control step. Control quantities (wrench,
/// poses, errors) are the pre-step values the controllers acted on; realized
/// velocities come from the world update they produced.
struct StepRecord {
  double time = 0.0;
  SystemConfiguration config_a, config_b;
  Pose tool_pose_a, tool_pose_b;
  Wrench wrench;
  Eigen::Vector3d goal_origin = Eigen::Vector3d::Zero();
  double depth = 0.0;  // tip position along the true hole axis
  Vector6d error_estimated = Vector6d::Zero();  // tip to controller goal
  Vector6d error_true = Vector6d::Zero();       // tip to true goal
  std::vector<double> residuals_a, residuals_b;
  CooperationPacket packet_a, packet_b;
  Vector6d cooperative_velocity = Vector6d::Zero();
  double constraint_residual = 0.0;  // ||C * cooperative_velocity||
  SystemVelocity commanded_a, commanded_b;
  SystemVelocity realized_a, realized_b;
  Vector6d tool_velocity_a = Vector6d::Zero();  // J_t * commanded, per agent
  Vector6d tool_velocity_b = Vector6d::Zero();
};

struct MissionReport {
  MissionStatus status = MissionStatus::timeout;
  std::vector<StepRecord> steps;
  double final_depth = 0.0;
  double final_error_lin = 0.0;  // to the controller goal
  double final_error_ang = 0.0;
  double final_error_true_lin = 0.0;  // to the true goal
  double final_error_true_ang = 0.0;
  double peak_wrench_norm = 0.0;
  double terminal_wrench_norm = 0.0;
  /// Net shift of the controller goal origin over the run (change-goal).
  Eigen::Vector3d goal_correction = Eigen::Vector3d::Zero();
};

/// Runs the full control loop: per step, goal adaptation from the measured
/// wrench, objective stacks and a first solver pass per agent, one
/// coordination round, the final solver pass tracking the cooperative tool
/// velocity, arm-vehicle coordination, then the world update with its
/// disturbances. Runs for the configured duration unless a failure interrupts;
/// success is judged on the final state.
MissionReport run_mission(const Scenario& scenario);

/// Writes one CSV per record family (poses, wrench, goal, residuals,
/// cooperation, velocities) plus a summary file, with 9 significant digits
/// and byte-stable content.
void write_telemetry(const MissionReport& report, const std::string& out_dir);

}  // namespace uvms
