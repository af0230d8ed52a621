#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "arbiter/behaviors.hpp"
#include "arbiter/planner.hpp"
#include "arbiter/sim.hpp"
#include "doctest.h"

using namespace arbiter;

namespace {

struct StraightPath {
  std::vector<Vec2> pts{{0, 0}, {100, 0}};
  std::vector<double> arcs{0, 100};
  PathView view() const { return {pts, arcs}; }
};

Observation on_straight(const StraightPath& p, double x, double lat, double heading, double speed) {
  Observation o;
  o.pose = Pose(x, lat, heading);
  o.projection.arc_position = x;
  o.projection.lateral_deviation = lat;
  o.projection.heading_error = heading;
  o.projection.centerline_point = {x, 0};
  o.speed = speed;
  o.distance_to_next = 50;
  o.centerline = p.view();
  return o;
}

}  // namespace

TEST_CASE("transition and stop speeds") {
  const StraightPath p;
  const BehaviorParams params = BehaviorParams::for_cell_size(10);
  const Observation o = on_straight(p, 10, 0, 0, 5);
  CHECK(behavior_control(BehaviorKind::Transition, o, params).desired_speed == 1.0);
  CHECK(behavior_control(BehaviorKind::Stop, o, params).desired_speed == 0.0);
  CHECK(behavior_control(BehaviorKind::FollowLane, o, params).desired_speed == params.v_follow);
}

TEST_CASE("follow lane on the centerline does not steer") {
  const StraightPath p;
  const auto cmd = behavior_control(BehaviorKind::FollowLane, on_straight(p, 10, 0, 0, 8), BehaviorParams::for_cell_size(10));
  CHECK(std::abs(cmd.steering) < 1e-12);
}

TEST_CASE("offset to the right steers left and vice versa") {
  const StraightPath p;
  const auto params = BehaviorParams::for_cell_size(10);
  CHECK(behavior_control(BehaviorKind::FollowLane, on_straight(p, 10, -0.5, 0, 4), params).steering > 0);
  CHECK(behavior_control(BehaviorKind::FollowLane, on_straight(p, 10, 0.5, 0, 4), params).steering < 0);
}

TEST_CASE("pure pursuit matches the curvature formula") {
  const StraightPath p;
  BehaviorParams params;
  params.wheelbase = 0.6;
  params.max_steering = 10.0;
  const Observation o = on_straight(p, 10, -1.0, 0, 0);
  // Target at (12, 0) seen from (10, -1) with heading 0: local (2, 1).
  const double kappa = 2.0 * 1.0 / 5.0;
  CHECK(pure_pursuit_steering(o, p.view(), 2.0, params) == doctest::Approx(std::atan(0.6 * kappa)).epsilon(1e-12));
  params.max_steering = 0.1;
  CHECK(pure_pursuit_steering(o, p.view(), 2.0, params) == doctest::Approx(0.1));
}

TEST_CASE("turn behavior steers toward a left-bending maneuver path") {
  const Track t = parse_track("cellsize 10\n.  S0\nS1 L1\n");
  const Route r = plan_route(t, Pose(2, 5, 0), {15, 17});
  const PathView path{r.path, r.path_arc};
  Observation o;
  o.pose = Pose(12, 5, 0);
  o.projection = project_on_route(t, r, o.pose, 10.0, 10.0).lane;
  o.speed = 1.0;
  o.in_maneuver = true;
  o.centerline = path;
  o.maneuver_geometry = path;
  const auto params = BehaviorParams::for_cell_size(10);
  CHECK(behavior_control(BehaviorKind::TurnLeft, o, params).steering > 0.05);
  CHECK(behavior_control(BehaviorKind::TurnLeft, o, params).desired_speed == params.v_turn);

  o.maneuver_geometry.reset();
  CHECK_THROWS_AS(behavior_control(BehaviorKind::TurnLeft, o, params), BehaviorError);
  o.in_maneuver = false;
  CHECK_NOTHROW(behavior_control(BehaviorKind::TurnLeft, o, params));
}

TEST_CASE("competence envelope examples") {
  const StraightPath p;
  const auto env = CompetenceEnvelope::for_cell_size(10);
  CHECK(check_envelope(BehaviorKind::TurnLeft, on_straight(p, 0, 0, 0, 1.5), env).within);
  CHECK(check_envelope(BehaviorKind::TurnLeft, on_straight(p, 0, 0, 0, 4.0), env).violation == EnvelopeViolation::Speed);
  CHECK(check_envelope(BehaviorKind::FollowLane, on_straight(p, 0, 0, 0, 4.0), env).within);
  CHECK(check_envelope(BehaviorKind::TurnRight, on_straight(p, 0, 0, 0.5, 1.0), env).violation ==
        EnvelopeViolation::Alignment);
  CHECK(check_envelope(BehaviorKind::CrossCrossing, on_straight(p, 0, 1.5, 0, 1.0), env).violation ==
        EnvelopeViolation::Lateral);
}

TEST_CASE("behaviors are pure and bounded on random observations") {
  const StraightPath p;
  const auto params = BehaviorParams::for_cell_size(10);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> x(1, 90), lat(-3, 3), hd(-1.2, 1.2), v(0, 15);
  for (int i = 0; i < 2000; ++i) {
    Observation o = on_straight(p, x(rng), lat(rng), hd(rng), v(rng));
    o.maneuver_geometry = p.view();
    o.in_maneuver = (i % 2) == 0;
    for (BehaviorKind k : kAllBehaviors) {
      const auto a = behavior_control(k, o, params);
      const auto b = behavior_control(k, o, params);
      CHECK(a == b);
      CHECK(std::abs(a.steering) <= params.max_steering + 1e-12);
      CHECK(a.desired_speed >= 0.0);
    }
    CHECK(behavior_control(BehaviorKind::Transition, o, params).steering ==
          behavior_control(BehaviorKind::FollowLane, o, params).steering);
    CHECK(behavior_control(BehaviorKind::Stop, o, params).steering ==
          behavior_control(BehaviorKind::FollowLane, o, params).steering);
  }
}

TEST_CASE("closed-loop turn at turn speed stays inside the lane envelope") {
  const Track t = parse_track("cellsize 10\n.  S0\nS1 L1\n");
  const Route r = plan_route(t, Pose(2, 5, 0), {15, 17});
  const PathView path{r.path, r.path_arc};
  const auto params = BehaviorParams::for_cell_size(10);
  const auto vp = VehicleParams::for_cell_size(10);
  const auto& turn = r.instructions[0];
  VehicleState s{Pose(10, 5, 0), params.v_turn, 0.0};
  double arc = turn.anchor_arc;
  double worst = 0.0;
  for (int i = 0; i < 1000 && arc < turn.exit_arc; ++i) {
    Observation o;
    o.pose = s.pose;
    o.projection = project_on_route(t, r, s.pose, arc, 10.0).lane;
    arc = o.projection.arc_position;
    o.speed = s.speed;
    o.in_maneuver = true;
    o.centerline = path;
    o.maneuver_geometry = path;
    worst = std::max(worst, std::abs(o.projection.lateral_deviation));
    s = vehicle_step(s, behavior_control(BehaviorKind::TurnLeft, o, params), vp, 0.05);
  }
  CHECK(arc >= turn.exit_arc);
  CHECK(worst < 1.0);
}
