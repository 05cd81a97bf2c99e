#include "uvms/cooperation.hpp"

#include "uvms/algebra.hpp"

namespace uvms {

Eigen::VectorXd CooperationPacket::serialize() const {
  Eigen::VectorXd data(42);
  data.head<6>() = noncoop_tool_velocity;
  data.tail<36>() = Eigen::Map<const Eigen::VectorXd>(projector.data(), 36);
  return data;
}

CooperationPacket CooperationPacket::deserialize(const Eigen::VectorXd& data) {
  if (data.size() != 42) throw ContractViolation("CooperationPacket: expected 42 numbers");
  CooperationPacket p;
  p.noncoop_tool_velocity = data.head<6>();
  p.projector = Eigen::Map<const Matrix6d>(data.tail<36>().eval().data());
  return p;
}

Vector6d noncoop_tool_velocity(const Eigen::MatrixXd& tool_jac, const SystemVelocity& ydot) {
  if (tool_jac.rows() != 6 || tool_jac.cols() != ydot.dofs())
    throw ContractViolation("noncoop_tool_velocity: jacobian must be 6 x dofs");
  return tool_jac * ydot.to_vector();
}

Vector6d cooperative_velocity(const Vector6d& xa, const Vector6d& xb, const Vector6d& ideal,
                              double mu0) {
  if (!(mu0 > 0.0)) throw ContractViolation("cooperative_velocity: mu0 must be > 0");
  const double mu_a = mu0 + (ideal - xa).norm();
  const double mu_b = mu0 + (ideal - xb).norm();
  return (mu_a * xa + mu_b * xb) / (mu_a + mu_b);
}

Matrix6d constraint_matrix(const Matrix6d& pa, const Matrix6d& pb, bool* warning,
                           double idempotence_tol) {
  const bool bad = (pa * pa - pa).norm() > idempotence_tol || (pb * pb - pb).norm() > idempotence_tol;
  if (warning) *warning = bad;
  return pa - pb;
}

Vector6d feasible_velocity(const Vector6d& xhat, const Matrix6d& c) {
  // When both transmitted projectors agree, the constraint matrix is pure
  // rounding noise; a relative-tolerance pseudoinverse would treat that noise
  // as full rank and wipe out the whole velocity. Projector entries are O(1),
  // so an absolute cutoff separates genuine disagreement from noise.
  Eigen::JacobiSVD<Matrix6d> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-9) inv(i) = 1.0 / sv(i);
  const Matrix6d pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
  return xhat - pinv * (c * xhat);
}

Vector6d coordination_round(const CooperationPacket& packet_a, const CooperationPacket& packet_b,
                            const CoordinatorState& state, const Pose& tool_pose) {
  state.validate();
  const Vector6d ideal = state.ideal_gain * pose_error(tool_pose, state.goal_tool_pose);
  const Vector6d fused = cooperative_velocity(packet_a.noncoop_tool_velocity,
                                              packet_b.noncoop_tool_velocity, ideal, state.mu0);
  return feasible_velocity(fused, constraint_matrix(packet_a.projector, packet_b.projector));
}

}  // namespace uvms
