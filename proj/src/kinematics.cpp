#include "uvms/kinematics.hpp"

#include <cmath>

namespace uvms {

Eigen::Matrix3d rotation_rpy(const Eigen::Vector3d& eta2) {
  return (Eigen::AngleAxisd(eta2.z(), Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(eta2.y(), Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(eta2.x(), Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

Eigen::Vector3d rpy_from_rotation(const Eigen::Matrix3d& r) {
  const double pitch = std::asin(std::clamp(-r(2, 0), -1.0, 1.0));
  const double roll = std::atan2(r(2, 1), r(2, 2));
  const double yaw = std::atan2(r(1, 0), r(0, 0));
  return {roll, pitch, yaw};
}

Eigen::Matrix3d rpy_rate_matrix(const Eigen::Vector3d& eta2) {
  const double cr = std::cos(eta2.x()), sr = std::sin(eta2.x());
  const double cp = std::cos(eta2.y()), tp = std::tan(eta2.y());
  Eigen::Matrix3d t;
  t << 1, sr * tp, cr * tp,
       0, cr, -sr,
       0, sr / cp, cr / cp;
  return t;
}

Eigen::Vector3d axis_angle(const Eigen::Matrix3d& rotation) {
  const Eigen::AngleAxisd aa(rotation);
  return aa.angle() * aa.axis();
}

Pose vehicle_pose(const SystemConfiguration& c) {
  return Pose(rotation_rpy(c.eta2), c.eta1);
}

namespace {

Pose dh_transform(const DhRow& row, double q) {
  const double theta = q + row.theta_offset;
  const double ct = std::cos(theta), st = std::sin(theta);
  const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
  Pose p;
  p.rotation << ct, -st * ca, st * sa,
                st, ct * ca, -ct * sa,
                0, sa, ca;
  p.translation << row.a * ct, row.a * st, row.d;
  return p;
}

}  // namespace

Pose forward_kinematics(const ChainModel& chain, const SystemConfiguration& c) {
  if (c.joint_count() != chain.joint_count())
    throw ContractViolation("forward_kinematics: configuration does not match chain");
  Pose p = vehicle_pose(c) * chain.base_to_arm;
  for (int i = 0; i < chain.joint_count(); ++i) p = p * dh_transform(chain.dh_rows[i], c.q(i));
  return p * chain.ee_to_tool;
}

Eigen::MatrixXd tool_jacobian(const ChainModel& chain, const SystemConfiguration& c) {
  const int l = chain.joint_count();
  if (c.joint_count() != l)
    throw ContractViolation("tool_jacobian: configuration does not match chain");
  const int n = l + 6;

  const Pose veh = vehicle_pose(c);
  Pose p = veh * chain.base_to_arm;
  std::vector<Eigen::Vector3d> axes(l), origins(l);
  for (int i = 0; i < l; ++i) {
    axes[i] = p.rotation.col(2);  // joint axis = z of the frame the joint rotates about
    origins[i] = p.translation;
    p = p * dh_transform(chain.dh_rows[i], c.q(i));
  }
  const Pose tool = p * chain.ee_to_tool;

  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(6, n);
  for (int i = 0; i < l; ++i) {
    j.col(i).head<3>() = axes[i].cross(tool.translation - origins[i]);
    j.col(i).tail<3>() = axes[i];
  }
  // vehicle linear velocity (body frame)
  j.block<3, 3>(0, l) = veh.rotation;
  // vehicle angular velocity (body frame): lever arm from vehicle origin to tool
  j.block<3, 3>(0, l + 3) = -skew(tool.translation - veh.translation) * veh.rotation;
  j.block<3, 3>(3, l + 3) = veh.rotation;
  return j;
}

Vector6d pose_error(const Pose& current, const Pose& goal) {
  Vector6d e;
  e.head<3>() = goal.translation - current.translation;
  e.tail<3>() = axis_angle(goal.rotation * current.rotation.transpose());
  return e;
}

SystemConfiguration integrate_configuration(const SystemConfiguration& c, const SystemVelocity& ydot,
                                            double dt, double pitch_margin) {
  if (!(dt > 0.0)) throw ContractViolation("integrate_configuration: dt must be > 0");
  if (ydot.joint_count() != c.joint_count())
    throw ContractViolation("integrate_configuration: velocity does not match configuration");

  SystemConfiguration next = c;
  next.q += ydot.qdot * dt;
  next.eta1 += rotation_rpy(c.eta2) * ydot.v1 * dt;
  next.eta2 += rpy_rate_matrix(c.eta2) * ydot.v2 * dt;
  if (std::abs(next.eta2.y()) >= M_PI_2 - pitch_margin)
    throw SingularityError("integrate_configuration: pitch within margin of +-pi/2");
  return next;
}

}  // namespace uvms
