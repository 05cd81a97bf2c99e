#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace uvms {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

/// Thrown when an input violates an interface contract (dimensions, ranges).
class ContractViolation : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a computation produces or receives non-finite values.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Thrown when the vehicle attitude approaches the pitch singularity of the
/// roll-pitch-yaw parameterization. Treated as a mission-level failure.
class SingularityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Generalized position of one agent: arm joints plus vehicle pose.
/// eta1 is the vehicle position in the world frame, eta2 the roll-pitch-yaw
/// angles (applied in the yaw-pitch-roll sequence).
struct SystemConfiguration {
  Eigen::VectorXd q;
  Eigen::Vector3d eta1 = Eigen::Vector3d::Zero();
  Eigen::Vector3d eta2 = Eigen::Vector3d::Zero();

  int joint_count() const { return static_cast<int>(q.size()); }
  int dofs() const { return joint_count() + 6; }
};

/// Generalized velocity: joint rates plus body-frame vehicle twist.
struct SystemVelocity {
  Eigen::VectorXd qdot;
  Eigen::Vector3d v1 = Eigen::Vector3d::Zero();
  Eigen::Vector3d v2 = Eigen::Vector3d::Zero();

  int joint_count() const { return static_cast<int>(qdot.size()); }
  int dofs() const { return joint_count() + 6; }

  Eigen::VectorXd to_vector() const {
    Eigen::VectorXd y(dofs());
    y << qdot, v1, v2;
    return y;
  }

  static SystemVelocity from_vector(const Eigen::VectorXd& y, int joint_count) {
    if (y.size() != joint_count + 6)
      throw ContractViolation("SystemVelocity: vector size " + std::to_string(y.size()) +
                              " does not match " + std::to_string(joint_count) + "+6 dofs");
    SystemVelocity v;
    v.qdot = y.head(joint_count);
    v.v1 = y.segment<3>(joint_count);
    v.v2 = y.tail<3>();
    return v;
  }

  static SystemVelocity zero(int joint_count) {
    SystemVelocity v;
    v.qdot = Eigen::VectorXd::Zero(joint_count);
    return v;
  }
};

/// Rigid transform: orthonormal rotation plus world-frame translation.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Pose() = default;
  Pose(const Eigen::Matrix3d& r, const Eigen::Vector3d& t) : rotation(r), translation(t) {}

  Pose operator*(const Pose& other) const {
    return Pose(rotation * other.rotation, translation + rotation * other.translation);
  }

  Pose inverse() const {
    return Pose(rotation.transpose(), -(rotation.transpose() * translation));
  }

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return translation + rotation * p; }
};

inline Eigen::Matrix3d skew(const Eigen::Vector3d& w) {
  Eigen::Matrix3d s;
  s << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
  return s;
}

}  // namespace uvms
