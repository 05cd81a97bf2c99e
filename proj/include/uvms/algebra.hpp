#pragma once

#include <optional>

#include "uvms/types.hpp"

namespace uvms {

/// Parameters of the singular-value oriented damping used by the task
/// pseudoinverse operator.
struct RegularizationParams {
  double sv_threshold = 0.05;
  double damping_max = 0.1;

  void validate() const {
    if (!(sv_threshold > 0.0)) throw ContractViolation("RegularizationParams: sv_threshold must be > 0");
    if (!(damping_max >= 0.0)) throw ContractViolation("RegularizationParams: damping_max must be >= 0");
  }
};

/// Componentwise bounds on the system velocity vector.
struct VelocityLimits {
  Eigen::VectorXd joint_max;
  double linear_max = 1.0;
  double angular_max = 1.0;

  void validate() const {
    if ((joint_max.array() <= 0.0).any() || !(linear_max > 0.0) || !(angular_max > 0.0))
      throw ContractViolation("VelocityLimits: all bounds must be strictly positive");
  }

  /// Bound vector for an n-dimensional velocity. n must equal either
  /// joint_max.size() + 6 (full system) or joint_max.size() (joints only,
  /// used by generic solver tests).
  Eigen::VectorXd bound_vector(int n) const {
    Eigen::VectorXd b(n);
    if (n == joint_max.size() + 6) {
      b.head(joint_max.size()) = joint_max;
      b.segment<3>(joint_max.size()).setConstant(linear_max);
      b.tail<3>().setConstant(angular_max);
    } else if (n == joint_max.size()) {
      b = joint_max;
    } else {
      throw ContractViolation("VelocityLimits: incompatible dimension " + std::to_string(n));
    }
    return b;
  }

  static VelocityLimits uniform(int joints, double bound) {
    VelocityLimits lim;
    lim.joint_max = Eigen::VectorXd::Constant(joints, bound);
    lim.linear_max = bound;
    lim.angular_max = bound;
    return lim;
  }
};

/// One-sided or two-sided activation band with cosine transitions of width
/// delta. epsilon is the norm guard used by norm-type objectives.
struct ActivationBand {
  std::optional<double> lower;
  std::optional<double> upper;
  double delta = 0.1;
  double epsilon = 0.0;

  void validate() const {
    if (!(delta > 0.0)) throw ContractViolation("ActivationBand: delta must be > 0");
    if (!(epsilon >= 0.0) || epsilon >= delta)
      throw ContractViolation("ActivationBand: epsilon must satisfy 0 <= epsilon < delta");
    if (lower && upper && !(*lower + delta <= *upper - delta))
      throw ContractViolation("ActivationBand: bounds too close for transition width");
  }
};

/// Task-oriented regularized pseudoinverse with singular-value damping.
/// Computes (X^T A^T A X + X^T (I-A)^T (I-A) X + V)^+ X^T A^T A where V damps
/// small singular directions of the bracketed matrix with the bell profile
/// p(s) = damping_max * (1 - min(s / sv_threshold, 1))^2.
/// `activation` holds the diagonal of A, entries in [0, 1]. `weight` (the Q
/// argument of the operator) is dimension-checked only; the damping above
/// already provides the continuity the operator must guarantee.
Eigen::MatrixXd regularized_pinv(const Eigen::MatrixXd& X, const Eigen::VectorXd& activation,
                                 const Eigen::MatrixXd& weight, const RegularizationParams& params);

/// Plain Moore-Penrose pseudoinverse via SVD with a relative cutoff.
Eigen::MatrixXd moore_penrose_pinv(const Eigen::MatrixXd& X, double rel_tol = 1e-10);

/// Direction-preserving saturation: if any component exceeds its bound, the
/// whole vector is scaled by the single factor that brings the worst violator
/// exactly to its bound.
Eigen::VectorXd saturate(const Eigen::VectorXd& increment, const Eigen::VectorXd& bounds);

SystemVelocity saturate(const SystemVelocity& increment, const VelocityLimits& limits);

/// Saturation of a solver update: largest factor s in [0, 1] such that
/// base + s * increment stays within bounds componentwise. Assumes base is
/// already feasible.
Eigen::VectorXd saturate_update(const Eigen::VectorXd& base, const Eigen::VectorXd& increment,
                                const Eigen::VectorXd& bounds);

/// Smooth [0, 1] activation for inequality objectives. Returns 1 deep in
/// violation, 0 deep in validity, with a raised-cosine blend of width delta at
/// each margin. Values at or below band.epsilon always deactivate (norm-type
/// guard).
double activation_scalar(double x, const ActivationBand& band);

}  // namespace uvms
