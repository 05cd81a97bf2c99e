#include <CLI11.hpp>
#include <cstdio>
#include <optional>

#include "uvms/mission.hpp"

namespace {

int status_exit_code(uvms::MissionStatus status) {
  switch (status) {
    case uvms::MissionStatus::success: return 0;
    case uvms::MissionStatus::external_contact: return 2;
    case uvms::MissionStatus::singularity: return 3;
    case uvms::MissionStatus::timeout: return 4;
  }
  return 1;
}

struct RunOptions {
  std::string scenario_path;
  std::string out_dir;
  std::optional<double> duration;
  std::optional<double> dt;
  std::optional<std::uint64_t> seed;
  bool enable_change_goal = false;
  bool disable_change_goal = false;
  bool enable_ft = false;
  bool disable_ft = false;
};

uvms::Scenario load_with_overrides(const RunOptions& opt) {
  uvms::Scenario scenario = uvms::load_scenario(opt.scenario_path);
  if (opt.duration) scenario.duration = *opt.duration;
  if (opt.dt) scenario.dt = *opt.dt;
  if (opt.seed) scenario.seed = *opt.seed;
  if (opt.enable_change_goal) scenario.change_goal_enabled = true;
  if (opt.disable_change_goal) scenario.change_goal_enabled = false;
  if (opt.enable_ft) scenario.force_torque_enabled = true;
  if (opt.disable_ft) scenario.force_torque_enabled = false;
  scenario.finalize();
  return scenario;
}

void add_run_flags(CLI::App* cmd, RunOptions& opt) {
  cmd->add_option("--scenario", opt.scenario_path, "scenario file")->required();
  cmd->add_option("--seed", opt.seed, "override the scenario seed");
  cmd->add_option("--duration", opt.duration, "override the run duration [s]");
  cmd->add_option("--dt", opt.dt, "override the control period [s]");
  cmd->add_flag("--enable-change-goal", opt.enable_change_goal, "force the goal-adaptation aid on");
  cmd->add_flag("--disable-change-goal", opt.disable_change_goal, "force the goal-adaptation aid off");
  cmd->add_flag("--enable-ft-objective", opt.enable_ft, "force the force-torque objective on");
  cmd->add_flag("--disable-ft-objective", opt.disable_ft, "force the force-torque objective off");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative dual arm-on-vehicle peg-in-hole simulator"};
  app.require_subcommand(1);

  RunOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "run one mission and write telemetry");
  add_run_flags(run, run_opt);
  run->add_option("--out", run_opt.out_dir, "telemetry output directory")->required();

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "parse and validate a scenario file");
  validate->add_option("--scenario", validate_path, "scenario file")->required();

  RunOptions sweep_opt;
  std::vector<double> sweep_errors;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "run the scenario once per goal-error x value and print a summary table");
  add_run_flags(sweep, sweep_opt);
  sweep->add_option("--goal-error-x", sweep_errors, "world-frame x goal errors [m]")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      uvms::load_scenario(validate_path);
      std::printf("ok: %s\n", validate_path.c_str());
      return 0;
    }
    if (*run) {
      const uvms::Scenario scenario = load_with_overrides(run_opt);
      const uvms::MissionReport report = uvms::run_mission(scenario);
      uvms::write_telemetry(report, run_opt.out_dir);
      std::printf("%s: status=%s depth=%.4f err_lin=%.4f wrench=%.4f peak=%.4f\n",
                  scenario.name.c_str(), uvms::to_string(report.status).c_str(),
                  report.final_depth, report.final_error_lin, report.terminal_wrench_norm,
                  report.peak_wrench_norm);
      return status_exit_code(report.status);
    }
    // sweep
    uvms::Scenario base = load_with_overrides(sweep_opt);
    std::printf("goal_error_x,status,final_depth,final_error_lin,peak_wrench,terminal_wrench,"
                "goal_correction_x\n");
    int worst = 0;
    for (double ex : sweep_errors) {
      uvms::Scenario scenario = base;
      scenario.goal_error_world = Eigen::Vector3d(ex, 0.0, 0.0);
      scenario.finalize();
      const uvms::MissionReport report = uvms::run_mission(scenario);
      std::printf("%.9g,%s,%.9g,%.9g,%.9g,%.9g,%.9g\n", ex,
                  uvms::to_string(report.status).c_str(), report.final_depth,
                  report.final_error_lin, report.peak_wrench_norm, report.terminal_wrench_norm,
                  report.goal_correction.x());
      worst = std::max(worst, status_exit_code(report.status));
    }
    return worst;
  } catch (const uvms::ContractViolation& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 5;
  }
}
