#include "uvms/simulation.hpp"

#include <cmath>
#include <random>

#include "uvms/algebra.hpp"

namespace uvms {

Wrench peg_hole_wrench(const Pose& peg_pose, const PegModel& peg, const HoleModel& hole,
                       const ContactParams& params) {
  peg.validate();
  hole.validate();
  params.validate();

  const Pose tip = peg_pose * peg.tip_frame;
  const Pose hole_inv = hole.pose.inverse();
  const Eigen::Vector3d tip_h = hole_inv.apply(tip.translation);
  if (tip_h.x() <= 0.0) return {};

  // Peg axis pointing from the body toward the tip, in the hole frame.
  const Eigen::Vector3d axis_w = tip.rotation.col(0);
  const Eigen::Vector3d axis_h = hole_inv.rotation * axis_w;
  double inserted = peg.length;
  if (axis_h.x() > 1e-9) inserted = std::min(inserted, tip_h.x() / axis_h.x());

  Eigen::Vector3d force_w = Eigen::Vector3d::Zero();
  Eigen::Vector3d torque_w = Eigen::Vector3d::Zero();
  for (int j = 0; j < params.sample_count; ++j) {
    const double s = (j + 0.5) * inserted / params.sample_count;
    const Eigen::Vector3d point_h = tip_h - s * axis_h;
    const double radial = point_h.tail<2>().norm();
    const double penetration = radial + peg.radius - hole.radius;
    if (penetration <= 0.0 || radial <= 1e-12) continue;
    Eigen::Vector3d dir_h = Eigen::Vector3d::Zero();
    dir_h.tail<2>() = -point_h.tail<2>() / radial;  // radially inward
    const Eigen::Vector3d f_w = hole.pose.rotation * (params.stiffness * penetration * dir_h);
    force_w += f_w;
    torque_w += (hole.pose.apply(point_h) - peg_pose.translation).cross(f_w);
  }

  Wrench w;
  w.f = peg_pose.rotation.transpose() * force_w;
  w.m = peg_pose.rotation.transpose() * torque_w;
  return w;
}

SystemVelocity propagate_collision(const Wrench& wrench, const Eigen::Matrix3d& world_r_tool,
                                   const Eigen::MatrixXd& tool_jac, const ContactParams& params) {
  params.validate();
  wrench.validate();
  if (tool_jac.rows() != 6 || tool_jac.cols() < 6)
    throw ContractViolation("propagate_collision: jacobian must be 6 x (joints + 6)");
  const int n = static_cast<int>(tool_jac.cols());
  const int l = n - 6;

  Eigen::VectorXd base = tool_jac.topRows<3>().transpose() * (world_r_tool * wrench.f) +
                         tool_jac.bottomRows<3>().transpose() * (world_r_tool * wrench.m);
  base.head(l) *= params.k_q;
  base.segment<3>(l) *= params.k_v1;
  base.tail<3>() *= params.k_v2;
  return SystemVelocity::from_vector(base, l);
}

Vector6d firm_grasp_correction(const Pose& pose_peg_a, const Pose& pose_peg_b, double gain) {
  if (!(gain > 0.0)) throw ContractViolation("firm_grasp_correction: gain must be > 0");
  return gain * pose_error(pose_peg_b, pose_peg_a);
}

GoalFrame change_goal(const GoalFrame& goal, const Wrench& wrench,
                      const Eigen::Matrix3d& world_r_tool, double k) {
  if (!(k > 0.0 && k < 1.0)) throw ContractViolation("change_goal: k must lie in (0, 1)");
  wrench.validate();
  Eigen::Vector3d shift_t = k * wrench.f;
  shift_t.x() = 0.0;  // never move along the insertion axis
  GoalFrame out = goal;
  out.origin += world_r_tool * shift_t;
  return out;
}

namespace {

/// Platform-stable uniform double in [0, 1).
double canonical(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Eigen::Vector3d unit_direction(std::mt19937_64& rng) {
  const double z = 2.0 * canonical(rng) - 1.0;
  const double phi = 2.0 * M_PI * canonical(rng);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

}  // namespace

Pose inject_pose_error(const Pose& true_pose, std::uint64_t seed, double lin_norm_max,
                       double ang_norm_max) {
  if (lin_norm_max < 0.0 || ang_norm_max < 0.0)
    throw ContractViolation("inject_pose_error: bounds must be >= 0");
  if (lin_norm_max == 0.0 && ang_norm_max == 0.0) return true_pose;

  std::mt19937_64 rng(seed);
  const Eigen::Vector3d lin_dir = unit_direction(rng);
  const double lin_norm = canonical(rng) * lin_norm_max;
  const Eigen::Vector3d ang_axis = unit_direction(rng);
  const double ang_norm = canonical(rng) * ang_norm_max;

  Pose out = true_pose;
  out.translation += lin_norm * lin_dir;
  out.rotation = Eigen::AngleAxisd(ang_norm, ang_axis).toRotationMatrix() * out.rotation;
  return out;
}

WorldState World::initial_state(const SystemConfiguration& config_a,
                                const SystemConfiguration& config_b) const {
  WorldState s;
  s.config_a = config_a;
  s.config_b = config_b;
  s.peg_pose_a = forward_kinematics(chain_a, config_a);
  s.peg_pose_b = forward_kinematics(chain_b, config_b);
  s.wrench = peg_hole_wrench(s.peg_pose_a, peg, hole, params);
  s.realized_a = SystemVelocity::zero(config_a.joint_count());
  s.realized_b = SystemVelocity::zero(config_b.joint_count());
  return s;
}

WorldState step_world(const World& world, const WorldState& state, const SystemVelocity& command_a,
                      const SystemVelocity& command_b, double dt) {
  if (!(dt > 0.0)) throw ContractViolation("step_world: dt must be > 0");

  const Eigen::MatrixXd jac_a = tool_jacobian(world.chain_a, state.config_a);
  const SystemVelocity disturbance =
      propagate_collision(state.wrench, state.peg_pose_a.rotation, jac_a, world.params);
  SystemVelocity realized_a = command_a;
  realized_a.qdot += disturbance.qdot;
  realized_a.v1 += disturbance.v1;
  realized_a.v2 += disturbance.v2;

  const Vector6d grasp =
      firm_grasp_correction(state.peg_pose_a, state.peg_pose_b, world.params.grasp_gain);
  const Eigen::MatrixXd jac_b = tool_jacobian(world.chain_b, state.config_b);
  const Eigen::VectorXd correction = moore_penrose_pinv(jac_b) * grasp;
  SystemVelocity realized_b = command_b;
  const SystemVelocity corr_v =
      SystemVelocity::from_vector(correction, state.config_b.joint_count());
  realized_b.qdot += corr_v.qdot;
  realized_b.v1 += corr_v.v1;
  realized_b.v2 += corr_v.v2;

  WorldState next;
  next.time = state.time + dt;
  next.config_a = integrate_configuration(state.config_a, realized_a, dt);
  next.config_b = integrate_configuration(state.config_b, realized_b, dt);
  next.peg_pose_a = forward_kinematics(world.chain_a, next.config_a);
  next.peg_pose_b = forward_kinematics(world.chain_b, next.config_b);
  next.wrench = peg_hole_wrench(next.peg_pose_a, world.peg, world.hole, world.params);
  next.realized_a = realized_a;
  next.realized_b = realized_b;
  return next;
}

}  // namespace uvms
