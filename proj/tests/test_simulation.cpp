#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "uvms/scenario.hpp"
#include "uvms/simulation.hpp"

using namespace uvms;

namespace {

HoleModel default_hole() {
  HoleModel hole;
  hole.pose = Pose(Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero());
  return hole;
}

/// Dense-sampling reference for the penalty contact model: same per-sample
/// law, 10^4 samples, rescaled to the production sample count.
Wrench dense_wrench(const Pose& peg_pose, const PegModel& peg, const HoleModel& hole,
                    const ContactParams& params, int dense_count = 10000) {
  ContactParams dense = params;
  dense.sample_count = dense_count;
  Wrench w = peg_hole_wrench(peg_pose, peg, hole, dense);
  const double scale = static_cast<double>(params.sample_count) / dense_count;
  w.f *= scale;
  w.m *= scale;
  return w;
}

}  // namespace

TEST_CASE("coaxial peg produces no wrench at any insertion") {
  const HoleModel hole = default_hole();
  PegModel peg;
  const ContactParams params;
  for (double depth : {0.01, 0.1, 0.25}) {
    const Pose pose(Eigen::Matrix3d::Identity(), {depth, 0.0, 0.0});
    const Wrench w = peg_hole_wrench(pose, peg, hole, params);
    CHECK(w.f.norm() == doctest::Approx(0.0));
    CHECK(w.m.norm() == doctest::Approx(0.0));
  }
}

TEST_CASE("uniform radial offset matches the closed form and the dense oracle") {
  const HoleModel hole = default_hole();
  PegModel peg;
  const ContactParams params;
  const Pose pose(Eigen::Matrix3d::Identity(), {0.1, 0.025, 0.0});
  const Wrench w = peg_hole_wrench(pose, peg, hole, params);

  // clearance 0.02 m, offset 0.025 m -> penetration 0.005 m at every sample
  const double expected = params.stiffness * 0.005 * params.sample_count;
  CHECK(w.f(1) == doctest::Approx(-expected).epsilon(1e-9));
  CHECK(w.f(0) == doctest::Approx(0.0));
  CHECK(w.f(2) == doctest::Approx(0.0));

  const Wrench dense = dense_wrench(pose, peg, hole, params);
  CHECK((w.f - dense.f).norm() < 1e-6 * std::max(1.0, dense.f.norm()));
  CHECK((w.m - dense.m).norm() < 1e-2 * std::max(1.0, dense.m.norm()));
}

TEST_CASE("tilted peg wrench agrees with the dense-sampling oracle") {
  const HoleModel hole = default_hole();
  PegModel peg;
  const ContactParams params;
  const Pose pose(Eigen::AngleAxisd(0.1, Eigen::Vector3d::UnitZ()).toRotationMatrix(),
                  {0.15, 0.01, 0.0});
  const Wrench w = peg_hole_wrench(pose, peg, hole, params);
  const Wrench dense = dense_wrench(pose, peg, hole, params);
  // midpoint sampling converges to the dense average
  CHECK((w.f - dense.f).norm() < 0.05 * std::max(1.0, dense.f.norm()));
  CHECK((w.m - dense.m).norm() < 0.05 * std::max(1.0, dense.m.norm()));
}

TEST_CASE("offset exactly at the clearance gives zero force") {
  const HoleModel hole = default_hole();
  PegModel peg;
  const Pose pose(Eigen::Matrix3d::Identity(), {0.1, 0.02, 0.0});
  const Wrench w = peg_hole_wrench(pose, peg, hole, ContactParams{});
  CHECK(w.f.norm() == doctest::Approx(0.0));
}

TEST_CASE("no wrench before the tip crosses the mouth") {
  const HoleModel hole = default_hole();
  PegModel peg;
  const Pose pose(Eigen::Matrix3d::Identity(), {-0.01, 0.05, 0.0});
  const Wrench w = peg_hole_wrench(pose, peg, hole, ContactParams{});
  CHECK(w.f.norm() == doctest::Approx(0.0));
}

TEST_CASE("contact force opposes the radial offset and is continuous at the clearance") {
  const HoleModel hole = default_hole();
  PegModel peg;
  const ContactParams params;
  double previous = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double offset = 0.0195 + i * 1e-5;
    const Pose pose(Eigen::Matrix3d::Identity(), {0.1, offset, 0.0});
    const Wrench w = peg_hole_wrench(pose, peg, hole, params);
    if (w.f.norm() > 0.0) CHECK(w.f(1) < 0.0);  // pushes back toward the axis
    const double step = std::abs(w.f.norm() - previous);
    CHECK(step <= params.stiffness * 1e-5 * params.sample_count + 1e-9);
    previous = w.f.norm();
  }
}

TEST_CASE("propagate_collision scales the transpose product blockwise") {
  ContactParams params;
  Wrench w;

  SUBCASE("zero wrench, zero disturbance") {
    const SystemVelocity d =
        propagate_collision(w, Eigen::Matrix3d::Identity(), Eigen::MatrixXd::Zero(6, 10), params);
    CHECK(d.to_vector().norm() == doctest::Approx(0.0));
  }
  SUBCASE("identity linear block routes the force to the vehicle") {
    w.f << 0.0, 1.0, 0.0;
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(6, 10);
    j.block<3, 3>(0, 4).setIdentity();
    params.k_v1 = 0.1;
    const SystemVelocity d = propagate_collision(w, Eigen::Matrix3d::Identity(), j, params);
    CHECK(d.v1.isApprox(Eigen::Vector3d(0.0, 0.1, 0.0), 1e-12));
    CHECK(d.qdot.norm() == doctest::Approx(0.0));
    CHECK(d.v2.norm() == doctest::Approx(0.0));
  }
  SUBCASE("random instance matches the direct transpose product") {
    std::mt19937 rng(61);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::MatrixXd j(6, 10);
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 10; ++c) j(r, c) = dist(rng);
    w.f << dist(rng), dist(rng), dist(rng);
    w.m << dist(rng), dist(rng), dist(rng);
    const Eigen::Matrix3d rot =
        Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix();
    const SystemVelocity d = propagate_collision(w, rot, j, params);
    Eigen::VectorXd expected =
        j.topRows<3>().transpose() * (rot * w.f) + j.bottomRows<3>().transpose() * (rot * w.m);
    expected.head(4) *= params.k_q;
    expected.segment<3>(4) *= params.k_v1;
    expected.tail<3>() *= params.k_v2;
    CHECK((d.to_vector() - expected).norm() < 1e-12);
  }
}

TEST_CASE("firm_grasp_correction closes the gap between the peg frames") {
  const Pose a(Eigen::Matrix3d::Identity(), {1.0, 2.0, 3.0});
  CHECK(firm_grasp_correction(a, a, 1.0).norm() == doctest::Approx(0.0));

  Pose b = a;
  b.translation.y() -= 0.001;
  const Vector6d v = firm_grasp_correction(a, b, 1.0);
  CHECK(v(1) == doctest::Approx(0.001));

  std::mt19937 rng(67);
  std::uniform_real_distribution<double> dist(-0.01, 0.01);
  for (int trial = 0; trial < 20; ++trial) {
    Pose off = a;
    off.translation += Eigen::Vector3d(dist(rng), dist(rng), dist(rng));
    off.rotation =
        Eigen::AngleAxisd(dist(rng), Eigen::Vector3d::UnitZ()).toRotationMatrix() * off.rotation;
    const Vector6d corr = firm_grasp_correction(a, off, 1.0);
    const double dt = 0.01;
    Pose stepped = off;
    stepped.translation += dt * corr.head<3>();
    const double gap0 = (off.translation - a.translation).norm();
    const double gap1 = (stepped.translation - a.translation).norm();
    CHECK(gap1 < gap0 + 1e-15);
  }
}

TEST_CASE("change_goal shifts laterally in the tool frame only") {
  GoalFrame goal;
  goal.origin << 1.0, 2.0, 3.0;
  Wrench w;

  CHECK((change_goal(goal, w, Eigen::Matrix3d::Identity(), 0.001).origin - goal.origin).norm() ==
        doctest::Approx(0.0));

  w.f << 5.0, 1.0, 0.0;
  const GoalFrame shifted = change_goal(goal, w, Eigen::Matrix3d::Identity(), 0.001);
  CHECK((shifted.origin - goal.origin).isApprox(Eigen::Vector3d(0.0, 0.001, 0.0), 1e-12));
  CHECK((shifted.rotation - goal.rotation).norm() == doctest::Approx(0.0));

  // with a rotated tool the shift still has no tool-frame x component
  const Eigen::Matrix3d rot =
      Eigen::AngleAxisd(1.0, Eigen::Vector3d(1, 1, 0).normalized()).toRotationMatrix();
  const GoalFrame rotated = change_goal(goal, w, rot, 0.001);
  const Eigen::Vector3d shift_tool = rot.transpose() * (rotated.origin - goal.origin);
  CHECK(shift_tool.x() == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(change_goal(goal, w, rot, 1.5), ContractViolation);
}

TEST_CASE("inject_pose_error is bounded and reproducible") {
  Pose truth(Eigen::AngleAxisd(0.4, Eigen::Vector3d::UnitY()).toRotationMatrix(), {1.0, -2.0, 0.5});

  const Pose same = inject_pose_error(truth, 99, 0.0, 0.0);
  CHECK((same.translation - truth.translation).norm() == doctest::Approx(0.0));
  CHECK((same.rotation - truth.rotation).norm() == doctest::Approx(0.0));

  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const Pose p = inject_pose_error(truth, seed, 0.006, 0.01);
    CHECK((p.translation - truth.translation).norm() <= 0.006 + 1e-12);
    CHECK(axis_angle(p.rotation * truth.rotation.transpose()).norm() <= 0.01 + 1e-12);
  }

  const Pose a = inject_pose_error(truth, 42, 0.006, 0.01);
  const Pose b = inject_pose_error(truth, 42, 0.006, 0.01);
  CHECK(a.translation == b.translation);
  CHECK(a.rotation == b.rotation);
}

TEST_CASE("step_world applies disturbances and integrates the agents") {
  const Scenario scenario = load_scenario(std::string(SCENARIO_DIR) + "/scenario_1_perfect.cfg");
  World world;
  world.chain_a = scenario.agent_a.chain;
  world.chain_b = scenario.agent_b.chain;
  world.peg = scenario.peg;
  world.hole = scenario.hole;
  world.params = scenario.contact;

  const WorldState s0 = world.initial_state(scenario.initial_a, scenario.initial_b);

  SUBCASE("zero commands and no contact leave the state unchanged except time") {
    CHECK(s0.wrench.is_zero());
    const WorldState s1 = step_world(world, s0, SystemVelocity::zero(4), SystemVelocity::zero(4), 0.1);
    CHECK(s1.time == doctest::Approx(0.1));
    CHECK((s1.config_a.q - s0.config_a.q).norm() == doctest::Approx(0.0));
    CHECK((s1.config_a.eta1 - s0.config_a.eta1).norm() == doctest::Approx(0.0));
    CHECK((s1.config_b.eta1 - s0.config_b.eta1).norm() == doctest::Approx(0.0));
  }
  SUBCASE("a contacting state makes agent A's realized velocity differ from the command") {
    WorldState contact = s0;
    contact.wrench.f << 0.0, -3.0, 0.0;
    const SystemVelocity cmd = SystemVelocity::zero(4);
    const WorldState s1 = step_world(world, contact, cmd, cmd, 0.1);
    CHECK((s1.realized_a.to_vector() - cmd.to_vector()).norm() > 0.0);
  }
}
