#include "uvms/scenario.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace uvms {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

/// Flat "[section]" + "key = value" format with '#' comments.
class ConfigFile {
public:
  explicit ConfigFile(const std::string& path) : path_(path) {
    std::ifstream in(path);
    if (!in) throw ContractViolation("cannot open scenario file: " + path);
    std::string line;
    std::string section;
    int number = 0;
    while (std::getline(in, line)) {
      ++number;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
      };
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') fail(number, "unterminated section header");
        section = trim(line.substr(1, line.size() - 2));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) fail(number, "expected 'key = value'");
      const std::string key = trim(line.substr(0, eq));
      if (key.empty()) fail(number, "empty key");
      entries_[section + "." + key] = {trim(line.substr(eq + 1)), number};
    }
  }

  [[noreturn]] void fail(int line, const std::string& message) const {
    throw ContractViolation(path_ + ":" + std::to_string(line) + ": " + message);
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second.value;
  }

  double get_double(const std::string& key, double fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    return parse_numbers(it->second, 1)(0);
  }

  bool get_bool(const std::string& key, bool fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const std::string& v = it->second.value;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(it->second.line, "expected boolean, got '" + v + "'");
  }

  Eigen::VectorXd get_vector(const std::string& key, const Eigen::VectorXd& fallback,
                             int expected = -1) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    return parse_numbers(it->second, expected);
  }

private:
  Eigen::VectorXd parse_numbers(const Entry& entry, int expected) const {
    std::istringstream in(entry.value);
    std::vector<double> values;
    double v;
    while (in >> v) values.push_back(v);
    if (!in.eof()) fail(entry.line, "expected numbers, got '" + entry.value + "'");
    if (expected >= 0 && static_cast<int>(values.size()) != expected)
      fail(entry.line, "expected " + std::to_string(expected) + " numbers, got " +
                           std::to_string(values.size()));
    return Eigen::Map<Eigen::VectorXd>(values.data(), values.size());
  }

  std::string path_;
  std::map<std::string, Entry> entries_;
};

Pose arm_transform(const ChainModel& chain, const Eigen::VectorXd& q) {
  SystemConfiguration c;
  c.q = q;
  return vehicle_pose(c).inverse() * forward_kinematics(chain, c);
}

}  // namespace

ChainModel default_chain(const Eigen::Vector3d& grasp_offset) {
  ChainModel chain;
  chain.dh_rows = {{0.2, -M_PI_2, 0.0, 0.0},
                   {0.3, M_PI_2, 0.0, 0.0},
                   {0.3, 0.0, 0.0, 0.0},
                   {0.2, 0.0, 0.0, 0.0}};
  chain.base_to_arm = Pose(Eigen::Matrix3d::Identity(), {0.5, 0.0, -0.1});
  chain.ee_to_tool = Pose(Eigen::Matrix3d::Identity(), grasp_offset);
  return chain;
}

Eigen::VectorXd default_arm_shape() {
  Eigen::VectorXd q(4);
  q << 0.3, 0.0, -0.6, 0.3;
  return q;
}

GoalFrame Scenario::true_goal() const {
  GoalFrame g;
  g.origin = hole.pose.apply({insertion_depth, 0.0, 0.0});
  g.rotation = hole.pose.rotation;
  g.insertion_depth = insertion_depth;
  return g;
}

GoalFrame Scenario::estimated_goal() const {
  Pose est_hole = hole.pose;
  if (vision_lin_error > 0.0 || vision_ang_error > 0.0)
    est_hole = inject_pose_error(hole.pose, seed, vision_lin_error, vision_ang_error);
  GoalFrame g;
  g.origin = est_hole.apply({insertion_depth, 0.0, 0.0}) + goal_error_world;
  g.rotation = est_hole.rotation * rotation_rpy(goal_error_rpy);
  g.insertion_depth = insertion_depth;
  return g;
}

Pose Scenario::start_tip_pose() const {
  const Eigen::Vector3d tip_hole = Eigen::Vector3d(insertion_depth, 0.0, 0.0) - start_offset;
  return Pose(hole.pose.rotation *
                  Eigen::AngleAxisd(start_yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix(),
              hole.pose.apply(tip_hole));
}

void Scenario::finalize() {
  const Pose tip = start_tip_pose();
  for (auto* agent : {&agent_a, &agent_b}) {
    const Pose vehicle = tip * arm_transform(agent->chain, agent->q0).inverse();
    SystemConfiguration c;
    c.q = agent->q0;
    c.eta1 = vehicle.translation;
    c.eta2 = rpy_from_rotation(vehicle.rotation);
    (agent == &agent_a ? initial_a : initial_b) = c;
  }
  validate();
}

void Scenario::validate() const {
  hole.validate();
  peg.validate();
  contact.validate();
  regularization.validate();
  limits.validate();
  if (!(peg.radius < hole.radius))
    throw ContractViolation("scenario: peg radius must be smaller than hole radius");
  if (!(insertion_depth > 0.0) || insertion_depth > hole.depth)
    throw ContractViolation("scenario: insertion_depth must lie in (0, hole depth]");
  if (!(dt > 0.0) || !(duration > 0.0))
    throw ContractViolation("scenario: duration and dt must be > 0");
  if (!(mu0 > 0.0)) throw ContractViolation("scenario: mu0 must be > 0");
  if (vision_lin_error < 0.0 || vision_ang_error < 0.0)
    throw ContractViolation("scenario: vision error bounds must be >= 0");
  for (const auto* agent : {&agent_a, &agent_b}) {
    const int l = agent->chain.joint_count();
    if (agent->q0.size() != l || agent->q_pref.size() != l ||
        static_cast<int>(agent->joint_ranges.size()) != l)
      throw ContractViolation("scenario: agent joint vectors must match the chain");
    if (limits.joint_max.size() != l)
      throw ContractViolation("scenario: velocity limits must match the chain");
  }
}

Scenario load_scenario(const std::string& path) {
  const ConfigFile cfg(path);
  Scenario s;
  s.name = cfg.get_string("mission.name", "unnamed");
  s.duration = cfg.get_double("mission.duration", s.duration);
  s.dt = cfg.get_double("mission.dt", s.dt);
  s.seed = static_cast<std::uint64_t>(cfg.get_double("mission.seed", 1));
  s.change_goal_enabled = cfg.get_bool("mission.change_goal", false);
  s.force_torque_enabled = cfg.get_bool("mission.force_torque_objective", false);

  const Eigen::VectorXd hole_pos =
      cfg.get_vector("hole.position", Eigen::Vector3d::Zero(), 3);
  const Eigen::VectorXd hole_rpy = cfg.get_vector("hole.rpy", Eigen::Vector3d::Zero(), 3);
  s.hole.pose = Pose(rotation_rpy(hole_rpy), hole_pos);
  s.hole.radius = cfg.get_double("hole.radius", s.hole.radius);
  s.hole.depth = cfg.get_double("hole.depth", s.hole.depth);
  s.hole.face_halfwidth = cfg.get_double("hole.face_halfwidth", s.hole.face_halfwidth);

  s.peg.length = cfg.get_double("peg.length", s.peg.length);
  s.peg.radius = cfg.get_double("peg.radius", s.peg.radius);

  s.insertion_depth = cfg.get_double("goal.insertion_depth", s.insertion_depth);
  s.goal_error_world = cfg.get_vector("goal.error_world", Eigen::Vector3d::Zero(), 3);
  s.goal_error_rpy = cfg.get_vector("goal.error_rpy", Eigen::Vector3d::Zero(), 3);
  s.vision_lin_error = cfg.get_double("goal.vision_lin_error", 0.0);
  s.vision_ang_error = cfg.get_double("goal.vision_ang_error", 0.0);

  s.start_offset = cfg.get_vector("start.offset", Eigen::Vector3d::Zero(), 3);
  s.start_yaw = cfg.get_double("start.yaw_deg", 0.0) * M_PI / 180.0;

  s.contact.stiffness = cfg.get_double("contact.stiffness", s.contact.stiffness);
  s.contact.sample_count = static_cast<int>(cfg.get_double("contact.sample_count", 16));
  s.contact.k_q = cfg.get_double("contact.k_q", s.contact.k_q);
  s.contact.k_v1 = cfg.get_double("contact.k_v1", s.contact.k_v1);
  s.contact.k_v2 = cfg.get_double("contact.k_v2", s.contact.k_v2);
  s.contact.grasp_gain = cfg.get_double("contact.grasp_gain", s.contact.grasp_gain);
  s.contact.change_goal_gain = cfg.get_double("contact.change_goal_gain", s.contact.change_goal_gain);

  s.regularization.sv_threshold = cfg.get_double("solver.sv_threshold", s.regularization.sv_threshold);
  s.regularization.damping_max = cfg.get_double("solver.damping_max", s.regularization.damping_max);
  s.mu0 = cfg.get_double("solver.mu0", s.mu0);

  auto& obj = s.objectives;
  obj.gamma_tool = cfg.get_double("objectives.gamma_tool", obj.gamma_tool);
  obj.gamma_joint = cfg.get_double("objectives.gamma_joint", obj.gamma_joint);
  obj.gamma_shape = cfg.get_double("objectives.gamma_shape", obj.gamma_shape);
  obj.gamma_f = cfg.get_double("objectives.gamma_f", obj.gamma_f);
  obj.gamma_m = cfg.get_double("objectives.gamma_m", obj.gamma_m);
  obj.joint_delta = cfg.get_double("objectives.joint_delta", obj.joint_delta);
  obj.max_tilt = cfg.get_double("objectives.max_tilt", obj.max_tilt);
  obj.tilt_delta = cfg.get_double("objectives.tilt_delta", obj.tilt_delta);
  obj.shape_threshold = cfg.get_double("objectives.shape_threshold", obj.shape_threshold);
  obj.shape_delta = cfg.get_double("objectives.shape_delta", obj.shape_delta);
  obj.force_band.upper = cfg.get_double("objectives.force_band_upper", 1.0);
  obj.force_band.delta = cfg.get_double("objectives.force_band_delta", 0.9);
  obj.force_band.epsilon = cfg.get_double("objectives.force_band_epsilon", 0.05);
  obj.priority_joint_limits = static_cast<int>(cfg.get_double("objectives.priority_joint_limits", 1));
  obj.priority_attitude = static_cast<int>(cfg.get_double("objectives.priority_attitude", 2));
  obj.priority_force_torque = static_cast<int>(cfg.get_double("objectives.priority_force_torque", 3));
  obj.priority_tool = static_cast<int>(cfg.get_double("objectives.priority_tool", 4));
  obj.priority_shape = static_cast<int>(cfg.get_double("objectives.priority_shape", 5));
  obj.priority_last = static_cast<int>(cfg.get_double("objectives.priority_last", 6));

  const auto load_agent = [&](const std::string& section, const Eigen::Vector3d& grasp_fallback) {
    AgentModel agent;
    const Eigen::Vector3d grasp = cfg.get_vector(section + ".grasp_offset", grasp_fallback, 3);
    agent.chain = default_chain(grasp);
    agent.q0 = cfg.get_vector(section + ".q0", default_arm_shape());
    agent.q_pref = cfg.get_vector(section + ".q_pref", agent.q0);
    const int l = agent.chain.joint_count();
    const double range = cfg.get_double(section + ".joint_range", 2.5);
    agent.joint_ranges.assign(l, JointRange{-range, range});
    return agent;
  };
  s.agent_a = load_agent("agent_a", {4.5, 0.4, 0.0});
  s.agent_b = load_agent("agent_b", {5.2, -0.4, 0.0});

  const double joint_vmax = cfg.get_double("limits.joint_max", 0.5);
  s.limits.joint_max = Eigen::VectorXd::Constant(s.agent_a.chain.joint_count(), joint_vmax);
  s.limits.linear_max = cfg.get_double("limits.linear_max", 0.3);
  s.limits.angular_max = cfg.get_double("limits.angular_max", 0.3);

  s.finalize();
  return s;
}

}  // namespace uvms
