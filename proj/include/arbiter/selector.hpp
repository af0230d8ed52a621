#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "arbiter/behaviors.hpp"
#include "arbiter/planner.hpp"

namespace arbiter {

enum class Strategy { Basic, Transition, Interpolation, Hybrid };
enum class CoefficientMode { TurnDistanceBased, InterpolationDistanceBased };
enum class BlendMode { SpeedOnly, SpeedAndSteering };

inline constexpr Strategy kAllStrategies[] = {Strategy::Basic, Strategy::Transition, Strategy::Interpolation,
                                              Strategy::Hybrid};

std::string to_string(Strategy s);
std::optional<Strategy> strategy_from_string(std::string_view name);

struct SelectorConfig {
  Strategy strategy = Strategy::Basic;
  double turn_distance = 5.0;
  double transition_factor = 3.0 / 8.0;
  double interpolation_distance = 10.0;
  CoefficientMode coefficient_mode = CoefficientMode::TurnDistanceBased;
  BlendMode blend_mode = BlendMode::SpeedAndSteering;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

struct SelectorDecision {
  BehaviorKind active = BehaviorKind::FollowLane;
  std::optional<BehaviorKind> blending_with;
  double coefficient = 0.0;  // weight of the approaching behavior
  ControlCommand command;
  bool switch_event = false;
  int controllers_invoked = 0;
};

struct SelectorState {
  BehaviorKind previous_active = BehaviorKind::FollowLane;
  std::size_t previous_instruction_index = 0;
  // Set once Transition engages for the current instruction; cleared when
  // the instruction changes. Keeps a shrinking speed-dependent region from
  // handing control back to FollowLane mid-deceleration.
  bool transition_engaged = false;
};

/// Lazily evaluates a behavior; each call counts as one controller run.
using ControlProvider = std::function<ControlCommand(BehaviorKind)>;

BehaviorKind instruction_behavior(const DrivingInstruction& instr);
BehaviorKind instruction_behavior(InstructionKind kind);

/// Extra slow-down region ahead of the turn distance; linear in speed.
double transition_distance(double speed, const SelectorConfig& cfg);

/// Weight of the next behavior, 1 at the anchor and 0 beyond the region.
double interpolation_coefficient(double d, const SelectorConfig& cfg);
double interpolation_coefficient(double d, const SelectorConfig& cfg, CoefficientMode mode);

ControlCommand blend(const ControlCommand& current, const ControlCommand& next, double c, BlendMode mode);

/// One arbitration tick. `state` is advanced in place.
SelectorDecision select(const SelectorConfig& cfg, SelectorState& state, const RouteProgress& progress,
                        const DrivingInstruction& next_instruction, const Observation& obs,
                        const ControlProvider& controls);

}  // namespace arbiter
