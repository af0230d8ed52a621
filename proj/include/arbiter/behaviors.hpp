#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "arbiter/geometry.hpp"
#include "arbiter/track.hpp"

namespace arbiter {

enum class BehaviorKind { FollowLane, TurnLeft, TurnRight, CrossCrossing, Transition, Stop };

inline constexpr BehaviorKind kAllBehaviors[] = {BehaviorKind::FollowLane, BehaviorKind::TurnLeft,
                                                 BehaviorKind::TurnRight,  BehaviorKind::CrossCrossing,
                                                 BehaviorKind::Transition, BehaviorKind::Stop};

std::string to_string(BehaviorKind kind);
std::optional<BehaviorKind> behavior_from_string(std::string_view name);
bool is_maneuver(BehaviorKind kind);

/// Non-owning view of a centerline with cumulative arc positions.
struct PathView {
  std::span<const Vec2> points;
  std::span<const double> arcs;

  bool empty() const { return points.size() < 2; }
  /// Point at arc `s`, extrapolated linearly past either end.
  Vec2 point_at(double s) const;
};

/// Geometric stand-in for the camera image a behavior sees.
struct Observation {
  Pose pose;
  LaneProjection projection;  // arc_position in route coordinates
  double speed = 0.0;
  double distance_to_next = 0.0;
  bool in_maneuver = false;
  PathView centerline;
  std::optional<PathView> maneuver_geometry;
};

struct ControlCommand {
  double desired_speed = 0.0;
  double steering = 0.0;

  friend bool operator==(const ControlCommand&, const ControlCommand&) = default;
};

struct BehaviorParams {
  double wheelbase = 0.6;
  double max_steering = 0.6;
  double v_follow = 8.0;
  double v_turn = 1.0;
  double transition_speed = 1.0;
  double stop_speed = 0.0;
  double lookahead_gain = 0.5;  // seconds
  double min_lookahead = 1.5;
  double turn_lookahead = 1.5;

  /// Defaults whose lengths scale with the mat size.
  static BehaviorParams for_cell_size(double cell_size);
};

struct CompetenceEnvelope {
  double max_entry_speed = 2.0;
  double max_heading_error = 0.3;
  double max_lateral_deviation = 1.0;

  static CompetenceEnvelope for_cell_size(double cell_size);
};

enum class EnvelopeViolation { None, Speed, Alignment, Lateral };

struct EnvelopeCheck {
  bool within = true;
  EnvelopeViolation violation = EnvelopeViolation::None;
};

class BehaviorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pure-pursuit steering toward the centerline point `lookahead` metres
/// ahead of the observation's projection.
double pure_pursuit_steering(const Observation& obs, const PathView& path, double lookahead,
                             const BehaviorParams& params);

ControlCommand behavior_control(BehaviorKind kind, const Observation& obs, const BehaviorParams& params);

/// Telemetry-only predicate; never feeds back into control.
EnvelopeCheck check_envelope(BehaviorKind kind, const Observation& obs, const CompetenceEnvelope& env);

}  // namespace arbiter
