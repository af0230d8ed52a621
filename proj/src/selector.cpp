#include "arbiter/selector.hpp"

#include <algorithm>
#include <stdexcept>

namespace arbiter {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Basic: return "basic";
    case Strategy::Transition: return "transition";
    case Strategy::Interpolation: return "interpolation";
    case Strategy::Hybrid: return "hybrid";
  }
  return "?";
}

std::optional<Strategy> strategy_from_string(std::string_view name) {
  for (Strategy s : kAllStrategies) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

void SelectorConfig::validate() const {
  if (!(turn_distance > 0.0)) throw std::invalid_argument("turn_distance must be positive");
  if (!(interpolation_distance > 0.0)) throw std::invalid_argument("interpolation_distance must be positive");
  if (!(transition_factor > 0.0)) throw std::invalid_argument("transition_factor must be positive");
}

BehaviorKind instruction_behavior(InstructionKind kind) {
  switch (kind) {
    case InstructionKind::TurnLeft: return BehaviorKind::TurnLeft;
    case InstructionKind::TurnRight: return BehaviorKind::TurnRight;
    case InstructionKind::CrossCrossing: return BehaviorKind::CrossCrossing;
    case InstructionKind::Stop: return BehaviorKind::Stop;
  }
  return BehaviorKind::Stop;
}

BehaviorKind instruction_behavior(const DrivingInstruction& instr) { return instruction_behavior(instr.kind); }

double transition_distance(double speed, const SelectorConfig& cfg) { return cfg.transition_factor * speed; }

double interpolation_coefficient(double d, const SelectorConfig& cfg, CoefficientMode mode) {
  const double reach =
      mode == CoefficientMode::TurnDistanceBased ? cfg.turn_distance : cfg.interpolation_distance;
  return std::clamp(1.0 - d / reach, 0.0, 1.0);
}

double interpolation_coefficient(double d, const SelectorConfig& cfg) {
  return interpolation_coefficient(d, cfg, cfg.coefficient_mode);
}

ControlCommand blend(const ControlCommand& current, const ControlCommand& next, double c, BlendMode mode) {
  ControlCommand out;
  out.desired_speed = (1.0 - c) * current.desired_speed + c * next.desired_speed;
  out.steering = mode == BlendMode::SpeedOnly ? current.steering : (1.0 - c) * current.steering + c * next.steering;
  return out;
}

namespace {

class Tick {
 public:
  Tick(const SelectorConfig& cfg, const ControlProvider& controls) : cfg_(cfg), controls_(controls) {}

  SelectorDecision only(BehaviorKind kind) {
    SelectorDecision d;
    d.active = kind;
    d.command = run(kind);
    return d;
  }

  /// Behavior `to` fully in charge while reporting the source it took over from.
  SelectorDecision took_over(BehaviorKind from, BehaviorKind to) {
    SelectorDecision d = only(to);
    d.blending_with = from;
    d.coefficient = 1.0;
    return d;
  }

  SelectorDecision mix(BehaviorKind from, BehaviorKind to, double c) {
    if (c <= 0.0) return only(from);
    if (c >= 1.0 && cfg_.blend_mode == BlendMode::SpeedAndSteering) return took_over(from, to);
    SelectorDecision d;
    d.command = blend(run(from), run(to), c, cfg_.blend_mode);
    d.coefficient = c;
    d.active = c >= 0.5 ? to : from;
    d.blending_with = c >= 0.5 ? from : to;
    return d;
  }

  int invoked() const { return invoked_; }

 private:
  ControlCommand run(BehaviorKind kind) {
    ++invoked_;
    return controls_(kind);
  }

  const SelectorConfig& cfg_;
  const ControlProvider& controls_;
  int invoked_ = 0;
};

}  // namespace

SelectorDecision select(const SelectorConfig& cfg, SelectorState& state, const RouteProgress& progress,
                        const DrivingInstruction& next_instruction, const Observation& obs,
                        const ControlProvider& controls) {
  if (progress.next_instruction_index != state.previous_instruction_index) state.transition_engaged = false;

  const double d = progress.distance_to_next;
  const BehaviorKind next = instruction_behavior(next_instruction);
  const double td = cfg.turn_distance;
  const double trd = transition_distance(obs.speed, cfg);
  const bool near = progress.in_maneuver || d <= td;
  // Transition only bridges lane following into a low-speed maneuver.
  const bool eligible = is_maneuver(next) && (state.previous_active == BehaviorKind::FollowLane ||
                                              state.previous_active == BehaviorKind::Transition);
  const bool in_transition_region =
      is_maneuver(next) && (state.transition_engaged || (eligible && d <= td + trd));

  Tick tick(cfg, controls);
  SelectorDecision decision;
  switch (cfg.strategy) {
    case Strategy::Basic:
      decision = tick.only(near ? next : BehaviorKind::FollowLane);
      break;

    case Strategy::Transition:
      if (near) {
        decision = tick.only(next);
      } else if (in_transition_region) {
        state.transition_engaged = true;
        decision = tick.only(BehaviorKind::Transition);
      } else {
        decision = tick.only(BehaviorKind::FollowLane);
      }
      break;

    case Strategy::Interpolation:
      if (progress.in_maneuver) {
        decision = tick.took_over(BehaviorKind::FollowLane, next);
      } else {
        decision = tick.mix(BehaviorKind::FollowLane, next, interpolation_coefficient(d, cfg));
      }
      break;

    case Strategy::Hybrid: {
      const BehaviorKind source = state.transition_engaged ? BehaviorKind::Transition : BehaviorKind::FollowLane;
      if (progress.in_maneuver) {
        decision = tick.took_over(source, next);
      } else if (d <= td) {
        decision = tick.mix(source, next, interpolation_coefficient(d, cfg));
      } else if (in_transition_region) {
        state.transition_engaged = true;
        decision = tick.mix(BehaviorKind::Transition, next, interpolation_coefficient(d, cfg));
      } else if (eligible) {
        // Ease into Transition ahead of its region. The distance to the
        // Transition behavior is d - TrD; the turn-distance reach would make
        // this weight identically zero here, so the interpolation distance
        // sets the reach.
        const double c = interpolation_coefficient(std::max(d - trd, 0.0), cfg,
                                                   CoefficientMode::InterpolationDistanceBased);
        decision = tick.mix(BehaviorKind::FollowLane, BehaviorKind::Transition, c);
      } else {
        decision = tick.mix(BehaviorKind::FollowLane, next, interpolation_coefficient(d, cfg));
      }
      break;
    }
  }

  decision.controllers_invoked = tick.invoked();
  decision.switch_event = decision.active != state.previous_active;
  state.previous_active = decision.active;
  state.previous_instruction_index = progress.next_instruction_index;
  return decision;
}

}  // namespace arbiter
