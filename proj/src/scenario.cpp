#include "arbiter/scenario.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace arbiter {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ScenarioError("'" + key + "': not a number: '" + s + "'");
  }
  return v;
}

std::vector<double> to_doubles(const std::string& key, const std::string& s, std::size_t n) {
  std::vector<double> out;
  std::stringstream in(s);
  for (std::string part; std::getline(in, part, ',');) out.push_back(to_double(key, trim(part)));
  if (out.size() != n) throw ScenarioError("'" + key + "': expected " + std::to_string(n) + " values");
  return out;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CoefficientMode coefficient_mode_from_string(std::string_view s) {
  if (s == "turn") return CoefficientMode::TurnDistanceBased;
  if (s == "distance") return CoefficientMode::InterpolationDistanceBased;
  throw ScenarioError("coefficient mode must be 'turn' or 'distance'");
}

BlendMode blend_mode_from_string(std::string_view s) {
  if (s == "speed") return BlendMode::SpeedOnly;
  if (s == "both") return BlendMode::SpeedAndSteering;
  throw ScenarioError("blend mode must be 'speed' or 'both'");
}

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
  Scenario sc;
  bool has_track = false, has_start = false, has_goal = false;
  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ScenarioError("line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key == "track") {
      sc.track_path = base_dir / value;
      has_track = true;
    } else if (key == "start") {
      const auto v = to_doubles(key, value, 3);
      sc.start = Pose(v[0], v[1], v[2]);
      has_start = true;
    } else if (key == "goal") {
      const auto v = to_doubles(key, value, 2);
      sc.goal = {v[0], v[1]};
      has_goal = true;
    } else if (key == "output") {
      sc.output_dir = base_dir / value;
    } else {
      sc.overrides[key] = value;
    }
  }
  if (!has_track || !has_start || !has_goal) throw ScenarioError("scenario needs track, start and goal");
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_file(path), path.parent_path());
}

void apply_override(RunConfig& c, const std::string& key, const std::string& value) {
  auto num = [&] { return to_double(key, value); };
  if (key == "selector.strategy") {
    const auto s = strategy_from_string(value);
    if (!s) throw ScenarioError("unknown strategy '" + value + "'");
    c.selector.strategy = *s;
  } else if (key == "selector.turn_distance") {
    c.selector.turn_distance = num();
  } else if (key == "selector.transition_factor") {
    c.selector.transition_factor = num();
  } else if (key == "selector.interpolation_distance") {
    c.selector.interpolation_distance = num();
  } else if (key == "selector.coefficient_mode") {
    c.selector.coefficient_mode = coefficient_mode_from_string(value);
  } else if (key == "selector.blend_mode") {
    c.selector.blend_mode = blend_mode_from_string(value);
  } else if (key == "behavior.follow_lane.speed") {
    c.behavior.v_follow = num();
  } else if (key == "behavior.follow_lane.lookahead_gain") {
    c.behavior.lookahead_gain = num();
  } else if (key == "behavior.follow_lane.min_lookahead") {
    c.behavior.min_lookahead = num();
  } else if (key == "behavior.turn.speed") {
    c.behavior.v_turn = num();
  } else if (key == "behavior.turn.lookahead") {
    c.behavior.turn_lookahead = num();
  } else if (key == "behavior.transition.speed") {
    c.behavior.transition_speed = num();
  } else if (key == "behavior.stop.speed") {
    c.behavior.stop_speed = num();
  } else if (key == "vehicle.wheelbase") {
    c.vehicle.wheelbase = c.behavior.wheelbase = num();
  } else if (key == "vehicle.max_steering") {
    c.vehicle.max_steering = c.behavior.max_steering = num();
  } else if (key == "vehicle.max_steering_rate") {
    c.vehicle.max_steering_rate = num();
  } else if (key == "vehicle.max_accel") {
    c.vehicle.max_accel = num();
  } else if (key == "vehicle.max_decel") {
    c.vehicle.max_decel = num();
  } else if (key == "vehicle.max_speed") {
    c.vehicle.max_speed = num();
  } else if (key == "sim.dt") {
    c.sim.dt = num();
  } else if (key == "sim.max_duration") {
    c.sim.max_duration = num();
  } else if (key == "sim.off_route_threshold") {
    c.sim.off_route_threshold = num();
  } else if (key == "sim.stop_speed_epsilon") {
    c.sim.stop_speed_epsilon = num();
  } else {
    throw ScenarioError("unknown configuration key '" + key + "'");
  }
}

void apply_overrides(RunConfig& config, const std::map<std::string, std::string>& overrides) {
  for (const auto& [k, v] : overrides) apply_override(config, k, v);
}

}  // namespace arbiter
