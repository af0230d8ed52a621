#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "arbiter/geometry.hpp"
#include "arbiter/sim.hpp"

namespace arbiter {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed start/goal experiment description. Unrecognised keys are rejected
/// when overrides are applied.
struct Scenario {
  std::filesystem::path track_path;
  Pose start;
  Vec2 goal;
  std::filesystem::path output_dir;
  std::map<std::string, std::string> overrides;  // selector.*, behavior.*, vehicle.*, sim.*
};

/// Parses `key=value` lines; `#` starts a comment. Relative track paths
/// resolve against `base_dir`.
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir);
Scenario load_scenario(const std::filesystem::path& path);

/// Applies one `section.key=value` override to `config`.
void apply_override(RunConfig& config, const std::string& key, const std::string& value);
void apply_overrides(RunConfig& config, const std::map<std::string, std::string>& overrides);

CoefficientMode coefficient_mode_from_string(std::string_view s);
BlendMode blend_mode_from_string(std::string_view s);

std::string read_file(const std::filesystem::path& path);

}  // namespace arbiter
