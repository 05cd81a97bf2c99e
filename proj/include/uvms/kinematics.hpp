#pragma once

#include <vector>

#include "uvms/types.hpp"

namespace uvms {

/// Standard Denavit-Hartenberg parameters of one revolute joint.
struct DhRow {
  double a = 0.0;
  double alpha = 0.0;
  double d = 0.0;
  double theta_offset = 0.0;
};

/// Serial-chain arm mounted on the vehicle. base_to_arm places the arm base in
/// the vehicle frame; ee_to_tool places the tool (peg tip) in the end-effector
/// frame.
struct ChainModel {
  std::vector<DhRow> dh_rows;
  Pose base_to_arm;
  Pose ee_to_tool;

  int joint_count() const { return static_cast<int>(dh_rows.size()); }
};

/// Rotation world <- vehicle for roll-pitch-yaw angles applied in the
/// yaw-pitch-roll sequence.
Eigen::Matrix3d rotation_rpy(const Eigen::Vector3d& eta2);

/// Roll-pitch-yaw extraction inverse to rotation_rpy (pitch in (-pi/2, pi/2)).
Eigen::Vector3d rpy_from_rotation(const Eigen::Matrix3d& rotation);

/// Maps body-frame angular velocity to roll-pitch-yaw rates. Singular at
/// pitch = +-pi/2.
Eigen::Matrix3d rpy_rate_matrix(const Eigen::Vector3d& eta2);

/// Axis-angle vector of a rotation matrix (norm = angle in [0, pi]).
Eigen::Vector3d axis_angle(const Eigen::Matrix3d& rotation);

Pose vehicle_pose(const SystemConfiguration& c);

/// World pose of the tool frame: world->vehicle, vehicle->arm base, DH chain,
/// end-effector->tool.
Pose forward_kinematics(const ChainModel& chain, const SystemConfiguration& c);

/// 6 x n geometric Jacobian mapping the system velocity (joint rates plus
/// body-frame vehicle twist) to the world-frame Cartesian velocity of the
/// tool. Column order matches SystemVelocity: [qdot, v1, v2].
Eigen::MatrixXd tool_jacobian(const ChainModel& chain, const SystemConfiguration& c);

/// 6-vector error from current to goal: world-frame translation difference on
/// top, axis-angle of goal * current^T below.
Vector6d pose_error(const Pose& current, const Pose& goal);

/// Euler step of the configuration: q += qdot dt, eta1 advances in the world
/// frame, eta2 through the rpy rate matrix. Throws SingularityError when the
/// pitch comes within pitch_margin of +-pi/2.
SystemConfiguration integrate_configuration(const SystemConfiguration& c, const SystemVelocity& ydot,
                                            double dt, double pitch_margin = 0.1);

}  // namespace uvms
