#include "uvms/mission.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "uvms/objectives.hpp"

namespace uvms {

std::string to_string(MissionStatus status) {
  switch (status) {
    case MissionStatus::success: return "success";
    case MissionStatus::external_contact: return "external-contact";
    case MissionStatus::singularity: return "singularity";
    case MissionStatus::timeout: return "timeout";
  }
  return "unknown";
}

namespace {

ActionList build_action(const Scenario& s, const AgentModel& agent, const SystemConfiguration& c,
                        const Pose& tool_pose, const Eigen::MatrixXd& tool_jac,
                        const GoalFrame& goal, const Wrench& wrench) {
  const auto& obj = s.objectives;
  const int n = c.dofs();
  ActionList action;
  action.n = n;
  action.tasks.push_back(joint_limits_task(c.q, agent.joint_ranges, obj.joint_delta,
                                           obj.gamma_joint, obj.priority_joint_limits, n));
  action.tasks.push_back(horizontal_attitude_task(c.eta2, obj.max_tilt, obj.tilt_delta,
                                                  obj.gamma_joint, obj.priority_attitude, n));
  if (s.force_torque_enabled)
    action.tasks.push_back(force_torque_task(wrench, tool_jac, obj.gamma_f, obj.gamma_m,
                                             obj.force_band, obj.priority_force_torque));
  action.tasks.push_back(
      tool_position_task(tool_pose, goal.tool_target(), tool_jac, obj.gamma_tool, obj.priority_tool));
  action.tasks.push_back(preferred_shape_task(c.q, agent.q_pref, obj.shape_threshold,
                                              obj.shape_delta, obj.gamma_shape, obj.priority_shape,
                                              n));
  action.tasks.push_back(last_task(n, obj.priority_last));
  return action;
}

/// Contact wrench expressed in the world frame for the objective builder.
Wrench world_wrench(const Wrench& tool_wrench, const Eigen::Matrix3d& world_r_tool) {
  Wrench w;
  w.f = world_r_tool * tool_wrench.f;
  w.m = world_r_tool * tool_wrench.m;
  return w;
}

}  // namespace

MissionReport run_mission(const Scenario& scenario) {
  scenario.validate();
  World world;
  world.chain_a = scenario.agent_a.chain;
  world.chain_b = scenario.agent_b.chain;
  world.peg = scenario.peg;
  world.hole = scenario.hole;
  world.params = scenario.contact;

  WorldState state = world.initial_state(scenario.initial_a, scenario.initial_b);
  GoalFrame goal = scenario.estimated_goal();
  const GoalFrame ideal = scenario.true_goal();
  const Eigen::Vector3d initial_goal_origin = goal.origin;
  const Pose hole_inv = scenario.hole.pose.inverse();
  const int total_steps = static_cast<int>(std::llround(scenario.duration / scenario.dt));

  MissionReport report;
  report.steps.reserve(total_steps);

  for (int step = 0; step < total_steps; ++step) {
    const Wrench wrench = state.wrench;
    if (scenario.change_goal_enabled && !wrench.is_zero())
      goal = change_goal(goal, wrench, state.peg_pose_a.rotation, scenario.contact.change_goal_gain);

    const Eigen::MatrixXd jac_a = tool_jacobian(scenario.agent_a.chain, state.config_a);
    const Eigen::MatrixXd jac_b = tool_jacobian(scenario.agent_b.chain, state.config_b);
    const Wrench wrench_w = world_wrench(wrench, state.peg_pose_a.rotation);

    const ActionList action_a = build_action(scenario, scenario.agent_a, state.config_a,
                                             state.peg_pose_a, jac_a, goal, wrench_w);
    const ActionList action_b = build_action(scenario, scenario.agent_b, state.config_b,
                                             state.peg_pose_b, jac_b, goal, wrench_w);

    StepRecord rec;
    rec.time = state.time;
    rec.config_a = state.config_a;
    rec.config_b = state.config_b;
    rec.tool_pose_a = state.peg_pose_a;
    rec.tool_pose_b = state.peg_pose_b;
    rec.wrench = wrench;
    rec.goal_origin = goal.origin;
    rec.depth = hole_inv.apply(state.peg_pose_a.translation).x();
    rec.error_estimated = pose_error(state.peg_pose_a, goal.tool_target());
    rec.error_true = pose_error(state.peg_pose_a, ideal.tool_target());

    try {
      // Non-cooperative pass: each agent as if alone.
      const SolveResult solo_a = icat_solve(action_a, scenario.regularization, scenario.limits);
      const SolveResult solo_b = icat_solve(action_b, scenario.regularization, scenario.limits);
      rec.packet_a.noncoop_tool_velocity = jac_a * solo_a.velocity;
      rec.packet_a.projector = jac_a * moore_penrose_pinv(jac_a);
      rec.packet_b.noncoop_tool_velocity = jac_b * solo_b.velocity;
      rec.packet_b.projector = jac_b * moore_penrose_pinv(jac_b);

      CoordinatorState coordinator;
      coordinator.mu0 = scenario.mu0;
      coordinator.goal_tool_pose = goal.tool_target();
      coordinator.ideal_gain = scenario.objectives.gamma_tool;
      rec.cooperative_velocity =
          coordination_round(rec.packet_a, rec.packet_b, coordinator, state.peg_pose_a);
      rec.constraint_residual =
          (constraint_matrix(rec.packet_a.projector, rec.packet_b.projector) *
           rec.cooperative_velocity)
              .norm();

      // Final pass: track the cooperative tool velocity as the top task,
      // then split the demand between arm and vehicle.
      const int top_a = action_a.tasks.front().priority - 1;
      ActionList coop_a = action_a;
      coop_a.tasks.insert(coop_a.tasks.begin(),
                          make_nonreactive_task(rec.cooperative_velocity, jac_a, top_a));
      ActionList coop_b = action_b;
      coop_b.tasks.insert(coop_b.tasks.begin(),
                          make_nonreactive_task(rec.cooperative_velocity, jac_b, top_a));

      const SolveResult final_a = icat_solve(coop_a, scenario.regularization, scenario.limits);
      const SolveResult final_b = icat_solve(coop_b, scenario.regularization, scenario.limits);
      rec.residuals_a = final_a.diagnostics.residuals;
      rec.residuals_b = final_b.diagnostics.residuals;

      const Eigen::VectorXd cmd_a =
          coordinate_arm_vehicle(coop_a, std::nullopt, scenario.regularization, scenario.limits);
      const Eigen::VectorXd cmd_b =
          coordinate_arm_vehicle(coop_b, std::nullopt, scenario.regularization, scenario.limits);
      rec.commanded_a = SystemVelocity::from_vector(cmd_a, state.config_a.joint_count());
      rec.commanded_b = SystemVelocity::from_vector(cmd_b, state.config_b.joint_count());
      rec.tool_velocity_a = jac_a * cmd_a;
      rec.tool_velocity_b = jac_b * cmd_b;

      state = step_world(world, state, rec.commanded_a, rec.commanded_b, scenario.dt);
    } catch (const SingularityError&) {
      report.steps.push_back(rec);
      report.status = MissionStatus::singularity;
      break;
    }

    rec.realized_a = state.realized_a;
    rec.realized_b = state.realized_b;
    report.steps.push_back(rec);
    report.peak_wrench_norm =
        std::max(report.peak_wrench_norm, std::hypot(wrench.f.norm(), wrench.m.norm()));

    const Eigen::Vector3d tip_h = hole_inv.apply(state.peg_pose_a.translation);
    if (tip_h.x() > 0.0 && tip_h.tail<2>().norm() >= scenario.hole.radius) {
      report.status = MissionStatus::external_contact;
      break;
    }
  }

  const Vector6d final_est = pose_error(state.peg_pose_a, goal.tool_target());
  const Vector6d final_true = pose_error(state.peg_pose_a, ideal.tool_target());
  report.final_depth = hole_inv.apply(state.peg_pose_a.translation).x();
  report.final_error_lin = final_est.head<3>().norm();
  report.final_error_ang = final_est.tail<3>().norm();
  report.final_error_true_lin = final_true.head<3>().norm();
  report.final_error_true_ang = final_true.tail<3>().norm();
  report.terminal_wrench_norm = std::hypot(state.wrench.f.norm(), state.wrench.m.norm());
  report.goal_correction = goal.origin - initial_goal_origin;

  if (report.status != MissionStatus::external_contact &&
      report.status != MissionStatus::singularity) {
    // Success means the peg sits at the commanded insertion depth; residual
    // lateral error is expected whenever the goal estimate is off.
    const bool depth_ok = std::abs(report.final_depth - scenario.insertion_depth) <= 0.01;
    report.status = depth_ok ? MissionStatus::success : MissionStatus::timeout;
  }
  return report;
}

namespace {

class CsvWriter {
public:
  CsvWriter(const std::filesystem::path& path, const std::string& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path.string());
    out_ << header << "\n";
  }

  void field(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    if (!first_) out_ << ",";
    out_ << buf;
    first_ = false;
  }

  void fields(const Eigen::Ref<const Eigen::VectorXd>& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) field(v(i));
  }

  void end_row() {
    out_ << "\n";
    first_ = true;
  }

private:
  std::ofstream out_;
  bool first_ = true;
};

std::string numbered_header(const std::string& prefix, int count) {
  std::string h;
  for (int i = 0; i < count; ++i) h += "," + prefix + std::to_string(i);
  return h;
}

}  // namespace

void write_telemetry(const MissionReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);

  const int joints_a = report.steps.empty() ? 0 : report.steps.front().config_a.joint_count();
  const int joints_b = report.steps.empty() ? 0 : report.steps.front().config_b.joint_count();
  const int levels_a = report.steps.empty() ? 0 : static_cast<int>(report.steps.front().residuals_a.size());
  const int levels_b = report.steps.empty() ? 0 : static_cast<int>(report.steps.front().residuals_b.size());

  {
    CsvWriter csv(dir / "poses.csv",
                  "time" + numbered_header("qa", joints_a) +
                      ",eta1a_x,eta1a_y,eta1a_z,eta2a_r,eta2a_p,eta2a_y" +
                      numbered_header("qb", joints_b) +
                      ",eta1b_x,eta1b_y,eta1b_z,eta2b_r,eta2b_p,eta2b_y"
                      ",tipa_x,tipa_y,tipa_z,tipa_r,tipa_p,tipa_yw"
                      ",tipb_x,tipb_y,tipb_z,tipb_r,tipb_p,tipb_yw,depth");
    for (const auto& s : report.steps) {
      csv.field(s.time);
      csv.fields(s.config_a.q);
      csv.fields(s.config_a.eta1);
      csv.fields(s.config_a.eta2);
      csv.fields(s.config_b.q);
      csv.fields(s.config_b.eta1);
      csv.fields(s.config_b.eta2);
      csv.fields(s.tool_pose_a.translation);
      csv.fields(rpy_from_rotation(s.tool_pose_a.rotation));
      csv.fields(s.tool_pose_b.translation);
      csv.fields(rpy_from_rotation(s.tool_pose_b.rotation));
      csv.field(s.depth);
      csv.end_row();
    }
  }
  {
    CsvWriter csv(dir / "wrench.csv", "time,fx,fy,fz,mx,my,mz,force_norm,torque_norm");
    for (const auto& s : report.steps) {
      csv.field(s.time);
      csv.fields(s.wrench.f);
      csv.fields(s.wrench.m);
      csv.field(s.wrench.f.norm());
      csv.field(s.wrench.m.norm());
      csv.end_row();
    }
  }
  {
    CsvWriter csv(dir / "goal.csv",
                  "time,goal_x,goal_y,goal_z"
                  ",err_est_lx,err_est_ly,err_est_lz,err_est_ax,err_est_ay,err_est_az"
                  ",err_true_lx,err_true_ly,err_true_lz,err_true_ax,err_true_ay,err_true_az");
    for (const auto& s : report.steps) {
      csv.field(s.time);
      csv.fields(s.goal_origin);
      csv.fields(s.error_estimated);
      csv.fields(s.error_true);
      csv.end_row();
    }
  }
  {
    CsvWriter csv(dir / "residuals.csv", "time" + numbered_header("res_a", levels_a) +
                                             numbered_header("res_b", levels_b));
    for (const auto& s : report.steps) {
      csv.field(s.time);
      for (double r : s.residuals_a) csv.field(r);
      for (double r : s.residuals_b) csv.field(r);
      csv.end_row();
    }
  }
  {
    CsvWriter csv(dir / "cooperation.csv",
                  "time" + numbered_header("packet_a", 42) + numbered_header("packet_b", 42) +
                      numbered_header("coop_v", 6) + ",constraint_residual");
    for (const auto& s : report.steps) {
      csv.field(s.time);
      csv.fields(s.packet_a.serialize());
      csv.fields(s.packet_b.serialize());
      csv.fields(s.cooperative_velocity);
      csv.field(s.constraint_residual);
      csv.end_row();
    }
  }
  {
    CsvWriter csv(dir / "velocities.csv",
                  "time" + numbered_header("cmd_a", joints_a + 6) +
                      numbered_header("cmd_b", joints_b + 6) +
                      numbered_header("real_a", joints_a + 6) +
                      numbered_header("real_b", joints_b + 6) + numbered_header("toolv_a", 6) +
                      numbered_header("toolv_b", 6));
    for (const auto& s : report.steps) {
      csv.field(s.time);
      csv.fields(s.commanded_a.to_vector());
      csv.fields(s.commanded_b.to_vector());
      csv.fields(s.realized_a.to_vector());
      csv.fields(s.realized_b.to_vector());
      csv.fields(s.tool_velocity_a);
      csv.fields(s.tool_velocity_b);
      csv.end_row();
    }
  }
  {
    std::ofstream out(dir / "summary.csv");
    if (!out) throw std::runtime_error("cannot open summary.csv");
    out << "status,steps,final_depth,final_error_lin,final_error_ang,final_error_true_lin,"
           "final_error_true_ang,peak_wrench_norm,terminal_wrench_norm,goal_correction_x,"
           "goal_correction_y,goal_correction_z\n";
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%s,%zu,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                  to_string(report.status).c_str(), report.steps.size(), report.final_depth,
                  report.final_error_lin, report.final_error_ang, report.final_error_true_lin,
                  report.final_error_true_ang, report.peak_wrench_norm,
                  report.terminal_wrench_norm, report.goal_correction.x(),
                  report.goal_correction.y(), report.goal_correction.z());
    out << buf;
  }
}

}  // namespace uvms
