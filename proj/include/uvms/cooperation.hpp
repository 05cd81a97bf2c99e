#pragma once

#include "uvms/kinematics.hpp"

namespace uvms {

/// The data one agent sends per coordination round: the world-frame tool
/// velocity it would apply on its own, and the projector J_t J_t^+ onto the
/// tool velocities it can realize.
struct CooperationPacket {
  Vector6d noncoop_tool_velocity = Vector6d::Zero();
  Matrix6d projector = Matrix6d::Identity();

  /// Flat serialization (6 + 36 numbers) used by the telemetry log and by the
  /// data-exchange budget check.
  Eigen::VectorXd serialize() const;
  static CooperationPacket deserialize(const Eigen::VectorXd& data);
};

/// Coordinator-side parameters: the floor weight mu0 and the proportional law
/// producing the ideal tool velocity toward the goal tool pose.
struct CoordinatorState {
  double mu0 = 0.1;
  Pose goal_tool_pose;
  double ideal_gain = 0.2;

  void validate() const {
    if (!(mu0 > 0.0)) throw ContractViolation("CoordinatorState: mu0 must be > 0");
    if (!(ideal_gain > 0.0)) throw ContractViolation("CoordinatorState: ideal_gain must be > 0");
  }
};

/// Tool velocity an agent would realize alone: J_t * ydot.
Vector6d noncoop_tool_velocity(const Eigen::MatrixXd& tool_jac, const SystemVelocity& ydot);

/// Weighted compromise between the two agents' tool velocities. The agent
/// further from the ideal velocity gets the larger weight mu_i = mu0 +
/// ||ideal - x_i||.
Vector6d cooperative_velocity(const Vector6d& xa, const Vector6d& xb, const Vector6d& ideal,
                              double mu0);

/// Cartesian constraint matrix C = Pa - Pb; its kernel is the set of tool
/// velocities both agents can realize. Inputs must be idempotent projectors;
/// a violation beyond `idempotence_tol` is reported through the optional
/// warning flag.
Matrix6d constraint_matrix(const Matrix6d& pa, const Matrix6d& pb, bool* warning = nullptr,
                           double idempotence_tol = 1e-6);

/// Projection of the fused velocity onto ker(C): (I - C^+ C) xhat.
Vector6d feasible_velocity(const Vector6d& xhat, const Matrix6d& c);

/// Full coordination round: ideal velocity from the goal tool pose, weighted
/// fusion of the two non-cooperative velocities, and projection onto the
/// commonly realizable set. The result is broadcast to both agents.
Vector6d coordination_round(const CooperationPacket& packet_a, const CooperationPacket& packet_b,
                            const CoordinatorState& state, const Pose& tool_pose);

}  // namespace uvms
