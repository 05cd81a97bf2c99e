#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "uvms/algebra.hpp"

using namespace uvms;

namespace {

Eigen::MatrixXd random_matrix(std::mt19937& rng, int rows, int cols) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

}  // namespace

TEST_CASE("moore_penrose_pinv satisfies the Penrose identities") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd x = random_matrix(rng, 4, 6);
    const Eigen::MatrixXd g = moore_penrose_pinv(x);
    CHECK((x * g * x - x).norm() == doctest::Approx(0.0).epsilon(1e-9));
    CHECK((g * x * g - g).norm() == doctest::Approx(0.0).epsilon(1e-9));
    CHECK((x * g - (x * g).transpose()).norm() == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("regularized_pinv reduces to the Moore-Penrose inverse when fully active and undamped") {
  std::mt19937 rng(11);
  RegularizationParams params;
  params.damping_max = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd x = random_matrix(rng, 3, 5);
    const Eigen::MatrixXd g =
        regularized_pinv(x, Eigen::VectorXd::Ones(3), Eigen::MatrixXd::Identity(5, 5), params);
    CHECK((g - moore_penrose_pinv(x)).norm() < 1e-9);
  }
}

TEST_CASE("regularized_pinv with zero activation returns zero") {
  std::mt19937 rng(13);
  const Eigen::MatrixXd x = random_matrix(rng, 3, 4);
  const Eigen::MatrixXd g = regularized_pinv(x, Eigen::VectorXd::Zero(3),
                                             Eigen::MatrixXd::Identity(4, 4), RegularizationParams{});
  CHECK(g.norm() == doctest::Approx(0.0));
}

TEST_CASE("regularized_pinv validates its inputs") {
  const Eigen::MatrixXd x = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(regularized_pinv(x, Eigen::VectorXd::Ones(2), Eigen::MatrixXd::Identity(3, 3),
                                   RegularizationParams{}),
                  ContractViolation);
  CHECK_THROWS_AS(regularized_pinv(x, Eigen::VectorXd::Ones(3), Eigen::MatrixXd::Identity(2, 2),
                                   RegularizationParams{}),
                  ContractViolation);
  CHECK_THROWS_AS(regularized_pinv(x, Eigen::VectorXd::Constant(3, 2.0),
                                   Eigen::MatrixXd::Identity(3, 3), RegularizationParams{}),
                  ContractViolation);
}

TEST_CASE("regularized_pinv is continuous across an activation sweep") {
  std::mt19937 rng(17);
  const Eigen::MatrixXd x = random_matrix(rng, 2, 4);
  Eigen::VectorXd a = Eigen::VectorXd::Ones(2);
  Eigen::MatrixXd previous;
  double max_step = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    a(0) = i / 1000.0;
    const Eigen::MatrixXd g =
        regularized_pinv(x, a, Eigen::MatrixXd::Identity(4, 4), RegularizationParams{});
    if (i > 0) max_step = std::max(max_step, (g - previous).norm());
    previous = g;
  }
  // The damping keeps the operator Lipschitz in the activation.
  CHECK(max_step < 0.05);
}

TEST_CASE("saturate scales uniformly and preserves direction") {
  Eigen::VectorXd v(3);
  v << 2.0, 1.0, -0.5;
  const Eigen::VectorXd bounds = Eigen::VectorXd::Ones(3);
  const Eigen::VectorXd s = saturate(v, bounds);
  CHECK(s(0) == doctest::Approx(1.0));
  CHECK(s(1) == doctest::Approx(0.5));
  CHECK(s(2) == doctest::Approx(-0.25));

  Eigen::VectorXd small(3);
  small << 0.1, -0.2, 0.3;
  CHECK((saturate(small, bounds) - small).norm() == doctest::Approx(0.0));
}

TEST_CASE("saturate_update keeps the accumulated velocity feasible") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  const Eigen::VectorXd bounds = Eigen::VectorXd::Ones(4);
  Eigen::VectorXd base = Eigen::VectorXd::Zero(4);
  for (int step = 0; step < 100; ++step) {
    Eigen::VectorXd inc(4);
    for (int i = 0; i < 4; ++i) inc(i) = dist(rng);
    base += saturate_update(base, inc, bounds);
    CHECK((base.array().abs() <= bounds.array() + 1e-12).all());
  }
}

TEST_CASE("saturate_update leaves feasible updates untouched") {
  Eigen::VectorXd base(2), inc(2);
  base << 0.5, -0.5;
  inc << 0.2, 0.3;
  const Eigen::VectorXd out = saturate_update(base, inc, Eigen::VectorXd::Ones(2));
  CHECK((out - inc).norm() == doctest::Approx(0.0));
}

TEST_CASE("activation_scalar implements the two-sided cosine band") {
  ActivationBand band;
  band.lower = 0.0;
  band.upper = 1.0;
  band.delta = 0.1;
  CHECK(activation_scalar(-0.5, band) == doctest::Approx(1.0));
  CHECK(activation_scalar(0.05, band) == doctest::Approx(0.5));
  CHECK(activation_scalar(0.5, band) == doctest::Approx(0.0));
  CHECK(activation_scalar(0.95, band) == doctest::Approx(0.5));
  CHECK(activation_scalar(1.5, band) == doctest::Approx(1.0));
}

TEST_CASE("activation_scalar honours the epsilon guard") {
  ActivationBand band;
  band.upper = 0.5;
  band.delta = 0.4;
  band.epsilon = 0.05;
  CHECK(activation_scalar(0.0, band) == doctest::Approx(0.0));
  CHECK(activation_scalar(0.05, band) == doctest::Approx(0.0));
  CHECK(activation_scalar(0.6, band) == doctest::Approx(1.0));
}

TEST_CASE("VelocityLimits builds bound vectors for full and joint-only sizes") {
  const VelocityLimits lim = VelocityLimits::uniform(4, 0.5);
  CHECK(lim.bound_vector(10).size() == 10);
  CHECK(lim.bound_vector(4).size() == 4);
  CHECK_THROWS_AS(lim.bound_vector(7), ContractViolation);
}
