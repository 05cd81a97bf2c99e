#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "uvms/algebra.hpp"
#include "uvms/cooperation.hpp"

using namespace uvms;

namespace {

std::mt19937& rng() {
  static std::mt19937 gen(59);
  return gen;
}

Eigen::MatrixXd random_matrix(int rows, int cols) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = dist(rng());
  return m;
}

Matrix6d range_projector(const Eigen::MatrixXd& j) { return j * moore_penrose_pinv(j); }

}  // namespace

TEST_CASE("noncoop_tool_velocity is the plain Jacobian product") {
  SystemVelocity ydot = SystemVelocity::zero(4);
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(6, 10);
  j.block<6, 6>(0, 4).setIdentity();

  CHECK(noncoop_tool_velocity(j, ydot).norm() == doctest::Approx(0.0));

  ydot.v1 << 0.1, 0.0, 0.0;
  Vector6d expected = Vector6d::Zero();
  expected(0) = 0.1;
  CHECK((noncoop_tool_velocity(j, ydot) - expected).norm() == doctest::Approx(0.0));

  const Eigen::MatrixXd jr = random_matrix(6, 10);
  Eigen::VectorXd y = random_matrix(10, 1);
  const SystemVelocity sv = SystemVelocity::from_vector(y, 4);
  CHECK((noncoop_tool_velocity(jr, sv) - jr * y).norm() == doctest::Approx(0.0));
}

TEST_CASE("cooperative_velocity weights the struggling agent more") {
  Vector6d xa = Vector6d::Zero(), xb = Vector6d::Zero(), ideal = Vector6d::Zero();

  SUBCASE("equal inputs pass through") {
    xa.setConstant(0.3);
    xb = xa;
    ideal.setRandom();
    CHECK((cooperative_velocity(xa, xb, ideal, 0.1) - xa).norm() < 1e-12);
  }
  SUBCASE("hand-computed asymmetric case") {
    xa(0) = 1.0;
    ideal(0) = 1.0;
    const Vector6d out = cooperative_velocity(xa, xb, ideal, 0.1);
    CHECK(out(0) == doctest::Approx(0.1 / 1.2));
    CHECK(out.tail<5>().norm() == doctest::Approx(0.0));
  }
  SUBCASE("result is biased toward the agent far from the ideal") {
    xa(0) = 1.0;
    ideal(0) = 1.0;
    const Vector6d out = cooperative_velocity(xa, xb, ideal, 0.1);
    const Vector6d mean = 0.5 * (xa + xb);
    CHECK((out - xb).norm() < (mean - xb).norm());
  }
  SUBCASE("mu0 must be positive") {
    CHECK_THROWS_AS(cooperative_velocity(xa, xb, ideal, 0.0), ContractViolation);
  }
}

TEST_CASE("constraint_matrix is the projector difference") {
  const Matrix6d identity = Matrix6d::Identity();
  CHECK(constraint_matrix(identity, identity).norm() == doctest::Approx(0.0));

  Matrix6d pb = identity;
  pb(5, 5) = 0.0;
  Matrix6d expected = Matrix6d::Zero();
  expected(5, 5) = 1.0;
  CHECK((constraint_matrix(identity, pb) - expected).norm() == doctest::Approx(0.0));

  bool warning = false;
  constraint_matrix(identity, 0.5 * identity, &warning);
  CHECK(warning);
  constraint_matrix(identity, pb, &warning);
  CHECK_FALSE(warning);
}

TEST_CASE("constraint_matrix annihilates the intersection of the two ranges") {
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix6d pa = range_projector(random_matrix(6, 8));
    const Matrix6d pb = range_projector(random_matrix(6, 4));
    const Matrix6d c = constraint_matrix(pa, pb);

    // v lies in both ranges iff Pa v = v and Pb v = v.
    Eigen::MatrixXd stacked(12, 6);
    stacked.topRows<6>() = Matrix6d::Identity() - pa;
    stacked.bottomRows<6>() = Matrix6d::Identity() - pb;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    for (int i = 0; i < 6; ++i) {
      if (i < sv.size() && sv(i) > 1e-9) continue;
      const Eigen::VectorXd v = svd.matrixV().col(i);
      CHECK((c * v).norm() < 1e-8);
    }
  }
}

TEST_CASE("feasible_velocity projects onto the kernel of C") {
  Vector6d xhat;
  xhat << 1, 1, 1, 1, 1, 1;

  CHECK((feasible_velocity(xhat, Matrix6d::Zero()) - xhat).norm() == doctest::Approx(0.0));

  Matrix6d c = Matrix6d::Zero();
  c(5, 5) = 1.0;
  const Vector6d out = feasible_velocity(xhat, c);
  CHECK(out(5) == doctest::Approx(0.0));
  CHECK(out.head<5>().isApprox(xhat.head<5>()));

  for (int trial = 0; trial < 20; ++trial) {
    const Matrix6d pa = range_projector(random_matrix(6, 7));
    const Matrix6d pb = range_projector(random_matrix(6, 5));
    const Matrix6d cr = constraint_matrix(pa, pb);
    Vector6d x;
    x = random_matrix(6, 1);
    const Vector6d projected = feasible_velocity(x, cr);
    CHECK((cr * projected).norm() < 1e-9);
    CHECK((feasible_velocity(projected, cr) - projected).norm() < 1e-9);
  }
}

TEST_CASE("coordination_round composes fusion and projection") {
  CoordinatorState state;
  state.mu0 = 0.1;
  state.ideal_gain = 0.2;
  state.goal_tool_pose = Pose();

  SUBCASE("aligned agents with full projectors track the ideal") {
    Pose tool;
    tool.translation << -0.5, 0.0, 0.0;  // goal 0.5 ahead in x
    const Vector6d ideal = 0.2 * pose_error(tool, state.goal_tool_pose);
    CooperationPacket a, b;
    a.noncoop_tool_velocity = ideal;
    b.noncoop_tool_velocity = ideal;
    CHECK((coordination_round(a, b, state, tool) - ideal).norm() < 1e-12);
  }
  SUBCASE("output is feasible and non-expansive at the goal") {
    CooperationPacket a, b;
    a.noncoop_tool_velocity = Vector6d::Random();
    b.noncoop_tool_velocity = Vector6d::Random();
    b.projector.setZero();
    b.projector.topLeftCorner<3, 3>().setIdentity();
    const Vector6d out = coordination_round(a, b, state, state.goal_tool_pose);
    const Matrix6d c = constraint_matrix(a.projector, b.projector);
    CHECK((c * out).norm() < 1e-9);
    CHECK(out.norm() <=
          std::max(a.noncoop_tool_velocity.norm(), b.noncoop_tool_velocity.norm()) + 1e-12);
  }
}

TEST_CASE("one round exchanges exactly two 42-number packets and one 6-vector") {
  CooperationPacket p;
  p.noncoop_tool_velocity = Vector6d::Random();
  p.projector = Matrix6d::Random();
  const Eigen::VectorXd wire = p.serialize();
  CHECK(wire.size() == 42);
  const CooperationPacket back = CooperationPacket::deserialize(wire);
  CHECK((back.noncoop_tool_velocity - p.noncoop_tool_velocity).norm() == doctest::Approx(0.0));
  CHECK((back.projector - p.projector).norm() == doctest::Approx(0.0));
  CHECK_THROWS_AS(CooperationPacket::deserialize(Eigen::VectorXd::Zero(41)), ContractViolation);

  const int inbound = static_cast<int>(p.serialize().size()) * 2;
  const Vector6d outbound = Vector6d::Zero();
  CHECK(inbound == 84);
  CHECK(outbound.size() == 6);
}
