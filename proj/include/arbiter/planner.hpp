#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "arbiter/geometry.hpp"
#include "arbiter/track.hpp"

namespace arbiter {

enum class InstructionKind { TurnLeft, TurnRight, CrossCrossing, Stop };
enum class CrossingExit { Straight, Left, Right };

std::string to_string(InstructionKind kind);
std::string to_string(CrossingExit exit);

/// Maneuver emitted by the planner. Lane following is implicit between
/// instructions and is never emitted.
struct DrivingInstruction {
  InstructionKind kind = InstructionKind::Stop;
  std::optional<NodeId> anchor;  // absent for Stop, which anchors on the goal
  std::optional<NodeId> exit;
  std::optional<CrossingExit> crossing_exit;
  double anchor_arc = 0.0;  // route arc where the maneuver region begins
  double exit_arc = 0.0;    // route arc where it ends

  friend bool operator==(const DrivingInstruction&, const DrivingInstruction&) = default;
};

/// Planned path. Route arc coordinates start at the start pose projection
/// (arc 0) and end at the goal projection (`total_length`).
struct Route {
  std::vector<EdgeId> edges;
  std::vector<double> edge_start_arc;  // first entry is <= 0 when starting mid-edge
  std::vector<DrivingInstruction> instructions;
  double total_length = 0.0;

  /// Centerline from start projection to goal projection.
  std::vector<Vec2> path;
  std::vector<double> path_arc;

  /// Route arc of `node`'s first occurrence at or after `from_arc`.
  std::optional<double> node_arc(const Track& track, NodeId node, double from_arc) const;
  /// Index into `edges` containing route arc `s` (clamped to the route).
  std::size_t edge_index_at(double s) const;
};

struct RouteProjection {
  LaneProjection lane;       // arc_position is in route coordinates
  std::ptrdiff_t edge_index = 0;  // -1 when the pose is not on a route edge
};

struct RouteProgress {
  double arc_position = 0.0;
  std::size_t next_instruction_index = 0;
  double distance_to_next = 0.0;
  bool in_maneuver = false;

  friend bool operator==(const RouteProgress&, const RouteProgress&) = default;
};

class PlanningError : public std::runtime_error {
 public:
  enum class Kind { NoPathExists, StartOffTrack, GoalOffTrack, NodeNotOnRoute, RouteDeparture };

  PlanningError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

std::string to_string(PlanningError::Kind kind);

/// Shortest path by arc length; ties go to fewer instructions, then to the
/// lexicographically smaller predecessor node.
Route plan_route(const Track& track, const Pose& start, Vec2 goal);

/// Along-centerline distance from route arc `from` to the next occurrence of
/// `to_node`.
double arc_distance(const Track& track, const Route& route, double from, NodeId to_node);

/// Projects onto the route centerline, searching only within `window` metres
/// of `hint_arc` so that self-crossing routes resolve to the right pass.
RouteProjection project_on_route(const Track& track, const Route& route, const Pose& pose, double hint_arc,
                                 double window);

RouteProgress initial_progress(const Route& route);
RouteProgress update_progress(const Route& route, const RouteProgress& progress,
                              const RouteProjection& projection);

}  // namespace arbiter
