#include "uvms/algebra.hpp"

#include <cmath>

namespace uvms {

namespace {

double bell_damping(double sv, const RegularizationParams& params) {
  const double r = 1.0 - std::min(sv / params.sv_threshold, 1.0);
  return params.damping_max * r * r;
}

}  // namespace

Eigen::MatrixXd regularized_pinv(const Eigen::MatrixXd& X, const Eigen::VectorXd& activation,
                                 const Eigen::MatrixXd& weight, const RegularizationParams& params) {
  params.validate();
  const auto m = X.rows();
  const auto n = X.cols();
  if (activation.size() != m)
    throw ContractViolation("regularized_pinv: activation size does not match row count");
  if (weight.rows() != n || weight.cols() != n)
    throw ContractViolation("regularized_pinv: weight must be n x n");
  if ((activation.array() < -1e-12).any() || (activation.array() > 1.0 + 1e-12).any())
    throw ContractViolation("regularized_pinv: activation entries must lie in [0, 1]");
  if (!X.allFinite() || !activation.allFinite())
    throw NumericalError("regularized_pinv: non-finite input");

  const Eigen::ArrayXd a2 = activation.array().square();
  const Eigen::ArrayXd ia2 = (1.0 - activation.array()).square();

  // Symmetric PSD core: X^T (A^2 + (I-A)^2) X.
  const Eigen::MatrixXd core =
      X.transpose() * (a2 + ia2).matrix().asDiagonal() * X;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(core);
  const Eigen::VectorXd& vals = eig.eigenvalues();
  const Eigen::MatrixXd& vecs = eig.eigenvectors();

  const double scale = std::max(vals.cwiseAbs().maxCoeff(), 1.0);
  Eigen::VectorXd inv_d(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    const double sv = std::max(vals(i), 0.0);
    const double d = sv + bell_damping(sv, params);
    inv_d(i) = d > 1e-14 * scale ? 1.0 / d : 0.0;
  }

  return vecs * inv_d.asDiagonal() * vecs.transpose() * X.transpose() * a2.matrix().asDiagonal();
}

Eigen::MatrixXd moore_penrose_pinv(const Eigen::MatrixXd& X, double rel_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = rel_tol * std::max(sv.size() > 0 ? sv(0) : 0.0, 1e-300);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Eigen::VectorXd saturate(const Eigen::VectorXd& increment, const Eigen::VectorXd& bounds) {
  if (increment.size() != bounds.size())
    throw ContractViolation("saturate: dimension mismatch");
  double worst = 1.0;
  for (Eigen::Index i = 0; i < increment.size(); ++i)
    worst = std::max(worst, std::abs(increment(i)) / bounds(i));
  return worst > 1.0 ? Eigen::VectorXd(increment / worst) : increment;
}

SystemVelocity saturate(const SystemVelocity& increment, const VelocityLimits& limits) {
  limits.validate();
  const Eigen::VectorXd y = increment.to_vector();
  return SystemVelocity::from_vector(saturate(y, limits.bound_vector(static_cast<int>(y.size()))),
                                     increment.joint_count());
}

Eigen::VectorXd saturate_update(const Eigen::VectorXd& base, const Eigen::VectorXd& increment,
                                const Eigen::VectorXd& bounds) {
  if (base.size() != increment.size() || base.size() != bounds.size())
    throw ContractViolation("saturate_update: dimension mismatch");
  double s = 1.0;
  for (Eigen::Index i = 0; i < increment.size(); ++i) {
    const double next = base(i) + increment(i);
    if (std::abs(next) <= bounds(i)) continue;
    const double target = increment(i) > 0.0 ? bounds(i) : -bounds(i);
    s = std::min(s, std::max((target - base(i)) / increment(i), 0.0));
  }
  return increment * s;
}

double activation_scalar(double x, const ActivationBand& band) {
  band.validate();
  if (band.epsilon > 0.0 && x <= band.epsilon) return 0.0;

  auto blend = [&](double u) {
    // raised cosine from 1 at u = 0 down to 0 at u = delta
    return 0.5 * (1.0 + std::cos(M_PI * u / band.delta));
  };

  double a = 0.0;
  if (band.lower) {
    if (x < *band.lower)
      a = 1.0;
    else if (x <= *band.lower + band.delta)
      a = std::max(a, blend(x - *band.lower));
  }
  if (band.upper) {
    if (x > *band.upper)
      a = 1.0;
    else if (x >= *band.upper - band.delta)
      a = std::max(a, blend(*band.upper - x));
  }
  return a;
}

}  // namespace uvms
