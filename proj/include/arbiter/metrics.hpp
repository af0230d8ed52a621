#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "arbiter/selector.hpp"
#include "arbiter/sim.hpp"

namespace arbiter {

inline constexpr double kDefaultSwitchWindow = 0.5;

struct SwitchPeak {
  double t = 0.0;
  BehaviorKind from = BehaviorKind::FollowLane;
  BehaviorKind to = BehaviorKind::FollowLane;
  double pre_switch_error = 0.0;  // squared error on the tick before the switch
  double peak = 0.0;              // max squared error in (t, t + window]
};

struct RunSummary {
  Strategy strategy = Strategy::Basic;
  RunStatus outcome = RunStatus::Timeout;
  double mean_squared_speed_error = 0.0;
  double peak_squared_speed_error = 0.0;
  double median_squared_speed_error = 0.0;
  double completion_time = 0.0;
  std::vector<double> switch_times;
  std::vector<SwitchPeak> post_switch_peak_errors;
  double mean_controllers_per_tick = 0.0;
};

class MetricsError : public std::runtime_error {
 public:
  enum class Kind { EmptyRun, IoError };
  MetricsError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

RunSummary summarize(const RunOutcome& outcome, Strategy strategy, double window = kDefaultSwitchWindow);

inline constexpr const char* kCsvHeader =
    "t,x,y,heading,speed,v_cmd,steering_cmd,steering_actual,active,coeff,d_next,sq_err,lat_dev,switch,controllers";

void emit_csv(const RunOutcome& outcome, std::ostream& out);
std::string emit_csv(const RunOutcome& outcome);

/// Squared-error-vs-time plot with a marker per behavior switch, as SVG.
std::string emit_chart(const RunOutcome& outcome, const std::string& title);

std::string emit_comparison(const std::vector<RunSummary>& summaries);

}  // namespace arbiter
