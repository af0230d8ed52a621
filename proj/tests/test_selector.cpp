#include <random>

#include "arbiter/selector.hpp"
#include "doctest.h"

using namespace arbiter;

namespace {

ControlCommand fixed_command(BehaviorKind k) {
  switch (k) {
    case BehaviorKind::FollowLane: return {8.0, 0.1};
    case BehaviorKind::TurnLeft: return {1.0, 0.4};
    case BehaviorKind::TurnRight: return {1.0, -0.4};
    case BehaviorKind::CrossCrossing: return {1.0, 0.0};
    case BehaviorKind::Transition: return {1.0, 0.1};
    case BehaviorKind::Stop: return {0.0, 0.1};
  }
  return {};
}

const ControlProvider kProvider = fixed_command;

DrivingInstruction instruction(InstructionKind k) {
  DrivingInstruction i;
  i.kind = k;
  return i;
}

RouteProgress progress(double d, bool in_maneuver = false, std::size_t idx = 0) {
  RouteProgress p;
  p.distance_to_next = in_maneuver ? 0.0 : d;
  p.in_maneuver = in_maneuver;
  p.next_instruction_index = idx;
  return p;
}

Observation moving(double speed) {
  Observation o;
  o.speed = speed;
  return o;
}

SelectorDecision one_tick(Strategy s, double d, double speed, InstructionKind k = InstructionKind::TurnLeft,
                          bool in_maneuver = false) {
  SelectorConfig cfg;
  cfg.strategy = s;
  SelectorState st;
  return select(cfg, st, progress(d, in_maneuver), instruction(k), moving(speed), kProvider);
}

}  // namespace

TEST_CASE("transition distance scales with speed") {
  SelectorConfig cfg;
  CHECK(transition_distance(12.0, cfg) == doctest::Approx(4.5));
  CHECK(transition_distance(4.0, cfg) == doctest::Approx(1.5));
  CHECK(transition_distance(0.0, cfg) == 0.0);
}

TEST_CASE("interpolation coefficient boundaries") {
  SelectorConfig cfg;
  CHECK(interpolation_coefficient(0.0, cfg) == 1.0);
  CHECK(interpolation_coefficient(5.0, cfg) == 0.0);
  CHECK(interpolation_coefficient(2.5, cfg) == doctest::Approx(0.5));
  CHECK(interpolation_coefficient(7.0, cfg) == 0.0);
  CHECK(interpolation_coefficient(5.0, cfg, CoefficientMode::InterpolationDistanceBased) == doctest::Approx(0.5));
  CHECK(interpolation_coefficient(-1.0, cfg) == 1.0);
}

TEST_CASE("blend examples") {
  const ControlCommand a{8, 0.2}, b{1, -0.2};
  const auto m = blend(a, b, 0.5, BlendMode::SpeedAndSteering);
  CHECK(m.desired_speed == doctest::Approx(4.5));
  CHECK(m.steering == doctest::Approx(0.0));
  const auto s = blend(a, b, 0.5, BlendMode::SpeedOnly);
  CHECK(s.desired_speed == doctest::Approx(4.5));
  CHECK(s.steering == 0.2);
  CHECK(blend(a, b, 0.0, BlendMode::SpeedAndSteering) == a);
  CHECK(blend(a, b, 1.0, BlendMode::SpeedAndSteering) == b);
}

TEST_CASE("selection examples") {
  CHECK(one_tick(Strategy::Basic, 100, 8).active == BehaviorKind::FollowLane);
  CHECK(one_tick(Strategy::Basic, 4, 8).active == BehaviorKind::TurnLeft);

  const auto tr = one_tick(Strategy::Transition, 8, 12);
  CHECK(tr.active == BehaviorKind::Transition);
  CHECK(tr.command.desired_speed == 1.0);
  CHECK(one_tick(Strategy::Transition, 10, 12).active == BehaviorKind::FollowLane);

  const auto in = one_tick(Strategy::Interpolation, 2.5, 8);
  CHECK(in.command.desired_speed == doctest::Approx(4.5));
  CHECK(in.coefficient == doctest::Approx(0.5));
  CHECK(in.controllers_invoked == 2);

  const auto stop = one_tick(Strategy::Interpolation, 0, 0.5, InstructionKind::Stop, true);
  CHECK(stop.active == BehaviorKind::Stop);
  CHECK(stop.command.desired_speed == 0.0);
}

TEST_CASE("transition is not used ahead of the final stop") {
  for (Strategy s : {Strategy::Transition, Strategy::Hybrid}) {
    const auto d = one_tick(s, 6, 12, InstructionKind::Stop);
    CHECK(d.active == BehaviorKind::FollowLane);
  }
}

TEST_CASE("selector properties on random inputs") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> dist(0, 40), speed(0, 15), unit(0, 1);
  const InstructionKind kinds[] = {InstructionKind::TurnLeft, InstructionKind::TurnRight,
                                   InstructionKind::CrossCrossing, InstructionKind::Stop};

  SUBCASE("coefficient is monotone and bounded") {
    SelectorConfig cfg;
    for (int i = 0; i < 5000; ++i) {
      const double a = dist(rng), b = dist(rng);
      const double ca = interpolation_coefficient(a, cfg), cb = interpolation_coefficient(b, cfg);
      CHECK(ca >= 0.0);
      CHECK(ca <= 1.0);
      if (a <= b) CHECK(ca >= cb);
    }
  }

  SUBCASE("blended commands are convex combinations") {
    for (int i = 0; i < 5000; ++i) {
      const ControlCommand a{speed(rng), unit(rng) - 0.5}, b{speed(rng), unit(rng) - 0.5};
      const double c = unit(rng);
      const auto m = blend(a, b, c, BlendMode::SpeedAndSteering);
      CHECK(m.desired_speed >= std::min(a.desired_speed, b.desired_speed) - 1e-12);
      CHECK(m.desired_speed <= std::max(a.desired_speed, b.desired_speed) + 1e-12);
      CHECK(m.steering >= std::min(a.steering, b.steering) - 1e-12);
      CHECK(m.steering <= std::max(a.steering, b.steering) + 1e-12);
    }
  }

  SUBCASE("decisions are consistent") {
    for (int i = 0; i < 4000; ++i) {
      SelectorConfig cfg;
      cfg.strategy = kAllStrategies[rng() % 4];
      cfg.blend_mode = (rng() % 2) ? BlendMode::SpeedOnly : BlendMode::SpeedAndSteering;
      const double d = dist(rng), v = speed(rng);
      const bool in_m = (rng() % 5) == 0;
      const auto instr = instruction(kinds[rng() % 4]);
      SelectorState st;
      st.previous_active = kAllBehaviors[rng() % 6];
      const BehaviorKind before = st.previous_active;
      SelectorState st2 = st;
      const auto dec = select(cfg, st, progress(d, in_m), instr, moving(v), kProvider);
      const auto dec2 = select(cfg, st2, progress(d, in_m), instr, moving(v), kProvider);

      CHECK(dec.command == dec2.command);
      CHECK(dec.active == dec2.active);
      CHECK(dec.switch_event == (dec.active != before));
      CHECK(st.previous_active == dec.active);
      CHECK(dec.coefficient >= 0.0);
      CHECK(dec.coefficient <= 1.0);
      if (!dec.blending_with) CHECK(dec.coefficient == 0.0);
      CHECK(dec.controllers_invoked >= 1);
      CHECK(dec.controllers_invoked <= 2);
      if (cfg.strategy == Strategy::Basic || cfg.strategy == Strategy::Transition) {
        CHECK(dec.controllers_invoked == 1);
        CHECK_FALSE(dec.blending_with.has_value());
      }
      if (dec.controllers_invoked == 1) CHECK(dec.command == fixed_command(dec.active));
      if (in_m) CHECK(dec.active == instruction_behavior(instr));
      if (instr.kind == InstructionKind::Stop && !in_m) {
        CHECK(dec.active != BehaviorKind::Transition);
        CHECK(dec.blending_with != BehaviorKind::Transition);
      }
    }
  }

  SUBCASE("far from any instruction every strategy follows the lane") {
    for (int i = 0; i < 2000; ++i) {
      const double v = speed(rng);
      SelectorConfig cfg;
      const double d = cfg.turn_distance + transition_distance(v, cfg) + cfg.interpolation_distance + dist(rng) + 1e-6;
      for (Strategy s : kAllStrategies) {
        const auto dec = one_tick(s, d, v, kinds[rng() % 4]);
        CHECK(dec.active == BehaviorKind::FollowLane);
        CHECK(dec.command == fixed_command(BehaviorKind::FollowLane));
        CHECK(dec.controllers_invoked == 1);
      }
    }
  }

  SUBCASE("basic and interpolation agree outside the turn distance and inside maneuvers") {
    for (int i = 0; i < 2000; ++i) {
      const double v = speed(rng);
      const auto k = kinds[rng() % 4];
      const double d = 5.0 + 1e-9 + dist(rng);
      CHECK(one_tick(Strategy::Basic, d, v, k).command == one_tick(Strategy::Interpolation, d, v, k).command);
      CHECK(one_tick(Strategy::Basic, 0, v, k, true).command ==
            one_tick(Strategy::Interpolation, 0, v, k, true).command);
    }
  }
}

TEST_CASE("switch events along an approach") {
  for (Strategy s : kAllStrategies) {
    SelectorConfig cfg;
    cfg.strategy = s;
    SelectorState st;
    BehaviorKind prev = st.previous_active;
    int switches = 0;
    for (double d = 30; d >= 0; d -= 0.25) {
      const auto dec = select(cfg, st, progress(d, d == 0.0), instruction(InstructionKind::TurnRight), moving(8),
                              kProvider);
      CHECK(dec.switch_event == (dec.active != prev));
      switches += dec.switch_event;
      prev = dec.active;
    }
    CHECK(prev == BehaviorKind::TurnRight);
    CHECK(switches >= 1);
    if (s == Strategy::Basic || s == Strategy::Interpolation) CHECK(switches == 1);
    if (s == Strategy::Transition) CHECK(switches == 2);
  }
}

TEST_CASE("transition stays engaged while the region shrinks") {
  SelectorConfig cfg;
  cfg.strategy = Strategy::Transition;
  SelectorState st;
  auto dec = select(cfg, st, progress(8, false, 0), instruction(InstructionKind::TurnLeft), moving(12), kProvider);
  CHECK(dec.active == BehaviorKind::Transition);
  dec = select(cfg, st, progress(7, false, 0), instruction(InstructionKind::TurnLeft), moving(2), kProvider);
  CHECK(dec.active == BehaviorKind::Transition);
  dec = select(cfg, st, progress(7, false, 1), instruction(InstructionKind::TurnLeft), moving(2), kProvider);
  CHECK(dec.active == BehaviorKind::FollowLane);
}

TEST_CASE("config validation") {
  SelectorConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.turn_distance = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
