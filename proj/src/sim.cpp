#include "arbiter/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arbiter {

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Success: return "Success";
    case RunStatus::OffRoute: return "OffRoute";
    case RunStatus::Timeout: return "Timeout";
  }
  return "?";
}

VehicleParams VehicleParams::for_cell_size(double cell_size) {
  VehicleParams p;
  p.wheelbase = 0.06 * cell_size;
  return p;
}

void VehicleParams::validate() const {
  for (double v : {wheelbase, max_steering, max_steering_rate, max_accel, max_decel, max_speed}) {
    if (!(v > 0.0)) throw std::invalid_argument("vehicle parameters must be positive");
  }
  if (max_decel < max_accel) throw std::invalid_argument("max_decel must be >= max_accel");
}

SimConfig SimConfig::for_cell_size(double cell_size) {
  SimConfig c;
  c.off_route_threshold = 0.35 * cell_size;
  return c;
}

void SimConfig::validate() const {
  if (!(dt > 0.0) || !(max_duration > 0.0) || !(off_route_threshold > 0.0) || !(stop_speed_epsilon > 0.0)) {
    throw std::invalid_argument("simulation timing and thresholds must be positive");
  }
}

RunConfig RunConfig::for_cell_size(double cell_size) {
  RunConfig c;
  c.behavior = BehaviorParams::for_cell_size(cell_size);
  c.vehicle = VehicleParams::for_cell_size(cell_size);
  c.sim = SimConfig::for_cell_size(cell_size);
  c.behavior.wheelbase = c.vehicle.wheelbase;
  c.behavior.max_steering = c.vehicle.max_steering;
  return c;
}

namespace {

double slew(double current, double target, double max_up, double max_down) {
  return std::clamp(target, current - max_down, current + max_up);
}

}  // namespace

VehicleState vehicle_step(const VehicleState& state, const ControlCommand& cmd, const VehicleParams& params,
                          double dt) {
  VehicleState next;
  const double steer_target = std::clamp(cmd.steering, -params.max_steering, params.max_steering);
  const double steer_step = params.max_steering_rate * dt;
  next.steering_actual = slew(state.steering_actual, steer_target, steer_step, steer_step);

  const double speed_target = std::clamp(cmd.desired_speed, 0.0, params.max_speed);
  next.speed = slew(state.speed, speed_target, params.max_accel * dt, params.max_decel * dt);

  const double heading = state.pose.heading + next.speed / params.wheelbase * std::tan(next.steering_actual) * dt;
  next.pose = Pose(state.pose.x + next.speed * dt * std::cos(heading),
                   state.pose.y + next.speed * dt * std::sin(heading), heading);
  return next;
}

RunOutcome run_simulation(const Track& track, const Route& route, const Pose& start, const RunConfig& config) {
  config.selector.validate();
  config.vehicle.validate();
  config.sim.validate();

  const SimConfig& sim = config.sim;
  const double cell = track.cell_size();
  const Vec2 goal = route.path.back();
  const PathView centerline{route.path, route.path_arc};

  RunOutcome outcome;
  VehicleState vehicle{start, 0.0, 0.0};
  RouteProgress progress = initial_progress(route);
  SelectorState selector_state;
  double hint = 0.0;

  const long max_steps = static_cast<long>(std::floor(sim.max_duration / sim.dt)) + 1;
  for (long step = 0;; ++step) {
    const double t = step * sim.dt;
    const RouteProjection proj = project_on_route(track, route, vehicle.pose, hint, cell);
    hint = proj.lane.arc_position;
    try {
      progress = update_progress(route, progress, proj);
    } catch (const PlanningError&) {
      outcome.status = RunStatus::OffRoute;
      outcome.completion_time = t;
      return outcome;
    }

    if (std::abs(proj.lane.lateral_deviation) > sim.off_route_threshold) {
      outcome.status = RunStatus::OffRoute;
      outcome.completion_time = t;
      return outcome;
    }
    if (distance(vehicle.pose.position(), goal) < 0.25 * cell && vehicle.speed < sim.stop_speed_epsilon &&
        progress.next_instruction_index + 1 == route.instructions.size()) {
      outcome.status = RunStatus::Success;
      outcome.completion_time = t;
      return outcome;
    }
    if (step >= max_steps) {
      outcome.status = RunStatus::Timeout;
      outcome.completion_time = t;
      return outcome;
    }

    const DrivingInstruction& next = route.instructions[progress.next_instruction_index];
    Observation obs;
    obs.pose = vehicle.pose;
    obs.projection = proj.lane;
    obs.speed = vehicle.speed;
    obs.distance_to_next = progress.distance_to_next;
    obs.in_maneuver = progress.in_maneuver;
    obs.centerline = centerline;
    if (next.kind != InstructionKind::Stop) obs.maneuver_geometry = centerline;

    const ControlProvider controls = [&](BehaviorKind kind) {
      return behavior_control(kind, obs, config.behavior);
    };
    const SelectorDecision decision =
        select(config.selector, selector_state, progress, next, obs, controls);

    StepRecord rec;
    rec.t = t;
    rec.vehicle = vehicle;
    rec.decision = decision;
    rec.distance_to_next = progress.distance_to_next;
    const double err = decision.command.desired_speed - vehicle.speed;
    rec.squared_speed_error = err * err;
    rec.lateral_deviation = proj.lane.lateral_deviation;
    rec.controllers_invoked = decision.controllers_invoked;
    outcome.records.push_back(rec);

    vehicle = vehicle_step(vehicle, decision.command, config.vehicle, sim.dt);
  }
}

}  // namespace arbiter
