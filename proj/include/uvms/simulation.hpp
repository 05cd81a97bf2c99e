#pragma once

#include "uvms/kinematics.hpp"
#include "uvms/objectives.hpp"

namespace uvms {

/// Cylindrical cavity. The hole-frame x axis points into the cavity; the
/// mouth lies in the frame's y-z plane. face_halfwidth bounds the flat face
/// around the mouth used for external-contact detection.
struct HoleModel {
  Pose pose;
  double radius = 0.07;
  double depth = 0.3;
  double face_halfwidth = 0.5;

  void validate() const {
    if (!(radius > 0.0) || !(depth > 0.0) || !(face_halfwidth > 0.0))
      throw ContractViolation("HoleModel: radius, depth and face_halfwidth must be > 0");
  }
};

/// Cylindrical peg held by both agents. The tool frame sits at the tip with
/// the x axis along the peg, pointing out of the material (into the hole when
/// inserting); the body extends along -x.
struct PegModel {
  double length = 6.0;
  double radius = 0.05;
  Pose tip_frame;  // tip relative to the tool frame; identity by default

  void validate() const {
    if (!(length > 0.0) || !(radius > 0.0))
      throw ContractViolation("PegModel: length and radius must be > 0");
  }
};

/// Insertion goal: world position the peg tip must reach and the hole-aligned
/// tip orientation. insertion_depth is the axial distance past the mouth the
/// origin corresponds to.
struct GoalFrame {
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  double insertion_depth = 0.2;

  Pose tool_target() const { return Pose(rotation, origin); }
};

/// Contact and disturbance parameters of the kinematic world.
struct ContactParams {
  double stiffness = 100.0;
  int sample_count = 16;
  double k_q = 0.05;
  double k_v1 = 0.05;
  double k_v2 = 0.05;
  double grasp_gain = 1.0;
  double change_goal_gain = 0.002;

  void validate() const {
    if (!(stiffness > 0.0)) throw ContractViolation("ContactParams: stiffness must be > 0");
    if (sample_count < 2) throw ContractViolation("ContactParams: sample_count must be >= 2");
    for (double g : {k_q, k_v1, k_v2, change_goal_gain})
      if (!(g > 0.0 && g < 1.0))
        throw ContractViolation("ContactParams: gains must lie in (0, 1)");
    if (!(grasp_gain > 0.0)) throw ContractViolation("ContactParams: grasp_gain must be > 0");
  }
};

/// Penalty contact wrench between the peg and the hole wall. Samples
/// sample_count midpoints along the inserted portion of the peg axis; each
/// sample with radial penetration contributes stiffness * penetration
/// directed toward the hole axis. Force and torque (about the tool origin)
/// are returned in the tool frame. Zero when the tip is outside the cavity
/// mouth.
Wrench peg_hole_wrench(const Pose& peg_pose, const PegModel& peg, const HoleModel& hole,
                       const ContactParams& params);

/// Velocity disturbance a contact wrench induces on the whole system:
/// J_linear^T f + J_angular^T m with the joint block scaled by k_q, the
/// vehicle linear block by k_v1 and the angular block by k_v2. The wrench is
/// tool-frame; world_r_tool rotates it into the frame of the Jacobian rows.
SystemVelocity propagate_collision(const Wrench& wrench, const Eigen::Matrix3d& world_r_tool,
                                   const Eigen::MatrixXd& tool_jac, const ContactParams& params);

/// Tool velocity closing the gap between agent B's peg frame and agent A's:
/// gain * pose_error(peg_b, peg_a).
Vector6d firm_grasp_correction(const Pose& pose_peg_a, const Pose& pose_peg_b, double gain);

/// Force-driven goal shift: the origin moves by k * (0, f_y, f_z) expressed
/// in the tool frame, so the insertion axis component is never altered.
/// Orientation and depth are untouched.
GoalFrame change_goal(const GoalFrame& goal, const Wrench& wrench,
                      const Eigen::Matrix3d& world_r_tool, double k);

/// Deterministic pseudo-random pose perturbation with linear offset norm
/// uniform in [0, lin_norm_max] and axis-angle norm uniform in
/// [0, ang_norm_max]. Same seed, same output.
Pose inject_pose_error(const Pose& true_pose, std::uint64_t seed, double lin_norm_max,
                       double ang_norm_max);

/// Snapshot of the kinematic world between steps.
struct WorldState {
  double time = 0.0;
  SystemConfiguration config_a, config_b;
  Pose peg_pose_a, peg_pose_b;
  Wrench wrench;  // contact wrench at the tip, tool frame
  SystemVelocity realized_a, realized_b;
};

/// The deterministic kinematic world: two arm-on-vehicle agents holding one
/// peg, a hole, and the contact/disturbance model.
struct World {
  ChainModel chain_a, chain_b;
  PegModel peg;
  HoleModel hole;
  ContactParams params;

  WorldState initial_state(const SystemConfiguration& config_a,
                           const SystemConfiguration& config_b) const;
};

/// One world step: adds the collision disturbance to agent A's command and
/// the firm-grasp correction to agent B's, integrates both configurations,
/// and recomputes peg poses and the contact wrench. Throws SingularityError
/// when an integration hits the attitude singularity.
WorldState step_world(const World& world, const WorldState& state, const SystemVelocity& command_a,
                      const SystemVelocity& command_b, double dt);

}  // namespace uvms
