#pragma once

#include <string>
#include <vector>

#include "arbiter/behaviors.hpp"
#include "arbiter/planner.hpp"
#include "arbiter/selector.hpp"
#include "arbiter/track.hpp"

namespace arbiter {

struct VehicleParams {
  double wheelbase = 0.6;
  double max_steering = 0.6;
  double max_steering_rate = 2.0;
  double max_accel = 3.0;
  double max_decel = 6.0;
  double max_speed = 15.0;

  static VehicleParams for_cell_size(double cell_size);
  void validate() const;
};

struct VehicleState {
  Pose pose;
  double speed = 0.0;
  double steering_actual = 0.0;

  friend bool operator==(const VehicleState&, const VehicleState&) = default;
};

struct SimConfig {
  double dt = 0.05;
  double max_duration = 120.0;
  double off_route_threshold = 3.5;
  double stop_speed_epsilon = 0.05;

  static SimConfig for_cell_size(double cell_size);
  void validate() const;
};

struct StepRecord {
  double t = 0.0;
  VehicleState vehicle;
  SelectorDecision decision;
  double distance_to_next = 0.0;
  double squared_speed_error = 0.0;
  double lateral_deviation = 0.0;
  int controllers_invoked = 0;
};

enum class RunStatus { Success, OffRoute, Timeout };
std::string to_string(RunStatus status);

struct RunOutcome {
  RunStatus status = RunStatus::Timeout;
  double completion_time = 0.0;
  std::vector<StepRecord> records;
};

/// Everything a run needs besides the track and route.
struct RunConfig {
  SelectorConfig selector;
  BehaviorParams behavior;
  VehicleParams vehicle;
  SimConfig sim;

  static RunConfig for_cell_size(double cell_size);
};

/// One forward-Euler step: actuators slew toward the command under their
/// rate limits, then the bicycle model advances with the new values.
VehicleState vehicle_step(const VehicleState& state, const ControlCommand& cmd, const VehicleParams& params,
                          double dt);

RunOutcome run_simulation(const Track& track, const Route& route, const Pose& start, const RunConfig& config);

}  // namespace arbiter
