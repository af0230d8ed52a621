#include "arbiter/behaviors.hpp"

#include <algorithm>
#include <cmath>

namespace arbiter {

std::string to_string(BehaviorKind kind) {
  switch (kind) {
    case BehaviorKind::FollowLane: return "FollowLane";
    case BehaviorKind::TurnLeft: return "TurnLeft";
    case BehaviorKind::TurnRight: return "TurnRight";
    case BehaviorKind::CrossCrossing: return "CrossCrossing";
    case BehaviorKind::Transition: return "Transition";
    case BehaviorKind::Stop: return "Stop";
  }
  return "?";
}

std::optional<BehaviorKind> behavior_from_string(std::string_view name) {
  for (BehaviorKind k : kAllBehaviors) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

bool is_maneuver(BehaviorKind kind) {
  return kind == BehaviorKind::TurnLeft || kind == BehaviorKind::TurnRight || kind == BehaviorKind::CrossCrossing;
}

Vec2 PathView::point_at(double s) const {
  const std::size_t n = points.size();
  std::size_t i = 0;
  if (s >= arcs[n - 1]) {
    i = n - 2;
  } else if (s > arcs[0]) {
    i = static_cast<std::size_t>(std::upper_bound(arcs.begin(), arcs.end(), s) - arcs.begin()) - 1;
  }
  const double span = arcs[i + 1] - arcs[i];
  const double t = span > 0.0 ? (s - arcs[i]) / span : 0.0;
  return points[i] + t * (points[i + 1] - points[i]);
}

BehaviorParams BehaviorParams::for_cell_size(double cell_size) {
  BehaviorParams p;
  p.wheelbase = 0.06 * cell_size;
  p.min_lookahead = 0.15 * cell_size;
  p.turn_lookahead = 0.15 * cell_size;
  return p;
}

CompetenceEnvelope CompetenceEnvelope::for_cell_size(double cell_size) {
  CompetenceEnvelope e;
  e.max_lateral_deviation = 0.1 * cell_size;
  return e;
}

double pure_pursuit_steering(const Observation& obs, const PathView& path, double lookahead,
                             const BehaviorParams& params) {
  const Vec2 target = path.point_at(obs.projection.arc_position + lookahead);
  const Vec2 heading{std::cos(obs.pose.heading), std::sin(obs.pose.heading)};
  const Vec2 d = target - obs.pose.position();
  const double lateral = cross(heading, d);
  const double dist2 = dot(d, d);
  if (dist2 <= 0.0) return 0.0;
  const double curvature = 2.0 * lateral / dist2;
  return std::clamp(std::atan(params.wheelbase * curvature), -params.max_steering, params.max_steering);
}

namespace {

double follow_lane_steering(const Observation& obs, const BehaviorParams& params) {
  const double lookahead = std::max(params.lookahead_gain * obs.speed, params.min_lookahead);
  return pure_pursuit_steering(obs, obs.centerline, lookahead, params);
}

}  // namespace

ControlCommand behavior_control(BehaviorKind kind, const Observation& obs, const BehaviorParams& params) {
  switch (kind) {
    case BehaviorKind::FollowLane:
      return {params.v_follow, follow_lane_steering(obs, params)};
    case BehaviorKind::Transition:
      return {params.transition_speed, follow_lane_steering(obs, params)};
    case BehaviorKind::Stop:
      return {params.stop_speed, follow_lane_steering(obs, params)};
    case BehaviorKind::TurnLeft:
    case BehaviorKind::TurnRight:
    case BehaviorKind::CrossCrossing: {
      if (obs.in_maneuver && !obs.maneuver_geometry) {
        throw BehaviorError(to_string(kind) + " requires maneuver geometry inside its region");
      }
      const PathView& path = obs.maneuver_geometry ? *obs.maneuver_geometry : obs.centerline;
      return {params.v_turn, pure_pursuit_steering(obs, path, params.turn_lookahead, params)};
    }
  }
  return {};
}

EnvelopeCheck check_envelope(BehaviorKind kind, const Observation& obs, const CompetenceEnvelope& env) {
  if (is_maneuver(kind) && obs.speed > env.max_entry_speed) return {false, EnvelopeViolation::Speed};
  if (std::abs(obs.projection.heading_error) > env.max_heading_error) return {false, EnvelopeViolation::Alignment};
  if (std::abs(obs.projection.lateral_deviation) > env.max_lateral_deviation) {
    return {false, EnvelopeViolation::Lateral};
  }
  return {true, EnvelopeViolation::None};
}

}  // namespace arbiter
