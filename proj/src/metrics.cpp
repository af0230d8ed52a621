#include "arbiter/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace arbiter {

RunSummary summarize(const RunOutcome& outcome, Strategy strategy, double window) {
  const auto& recs = outcome.records;
  if (recs.empty()) throw MetricsError(MetricsError::Kind::EmptyRun, "run has no records");

  RunSummary s;
  s.strategy = strategy;
  s.outcome = outcome.status;
  s.completion_time = outcome.completion_time;

  double sum = 0.0;
  double controllers = 0.0;
  std::vector<double> errors;
  errors.reserve(recs.size());
  for (const StepRecord& r : recs) {
    sum += r.squared_speed_error;
    controllers += r.controllers_invoked;
    s.peak_squared_speed_error = std::max(s.peak_squared_speed_error, r.squared_speed_error);
    errors.push_back(r.squared_speed_error);
  }
  const double n = static_cast<double>(recs.size());
  s.mean_squared_speed_error = sum / n;
  s.mean_controllers_per_tick = controllers / n;

  std::sort(errors.begin(), errors.end());
  const std::size_t mid = errors.size() / 2;
  s.median_squared_speed_error = errors.size() % 2 ? errors[mid] : 0.5 * (errors[mid - 1] + errors[mid]);

  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (!recs[i].decision.switch_event) continue;
    SwitchPeak p;
    p.t = recs[i].t;
    p.to = recs[i].decision.active;
    p.from = i > 0 ? recs[i - 1].decision.active : BehaviorKind::FollowLane;
    p.pre_switch_error = i > 0 ? recs[i - 1].squared_speed_error : 0.0;
    for (std::size_t j = i + 1; j < recs.size() && recs[j].t <= p.t + window + 1e-9; ++j) {
      p.peak = std::max(p.peak, recs[j].squared_speed_error);
    }
    s.switch_times.push_back(p.t);
    s.post_switch_peak_errors.push_back(p);
  }
  return s;
}

namespace {

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Shortest text that parses back to the same double.
std::string exact(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

void emit_csv(const RunOutcome& outcome, std::ostream& out) {
  if (outcome.records.empty()) throw MetricsError(MetricsError::Kind::EmptyRun, "run has no records");
  out << kCsvHeader << '\n';
  for (const StepRecord& r : outcome.records) {
    const auto& v = r.vehicle;
    const auto& d = r.decision;
    out << exact(r.t) << ',' << exact(v.pose.x) << ',' << exact(v.pose.y) << ',' << exact(v.pose.heading) << ','
        << exact(v.speed) << ',' << exact(d.command.desired_speed) << ',' << exact(d.command.steering) << ','
        << exact(v.steering_actual) << ',' << to_string(d.active) << ',' << exact(d.coefficient) << ','
        << exact(r.distance_to_next) << ',' << exact(r.squared_speed_error) << ',' << exact(r.lateral_deviation) << ','
        << (d.switch_event ? 1 : 0) << ',' << r.controllers_invoked << '\n';
  }
  if (!out) throw MetricsError(MetricsError::Kind::IoError, "failed writing CSV");
}

std::string emit_csv(const RunOutcome& outcome) {
  std::ostringstream out;
  emit_csv(outcome, out);
  return out.str();
}

std::string emit_chart(const RunOutcome& outcome, const std::string& title) {
  const auto& recs = outcome.records;
  if (recs.empty()) throw MetricsError(MetricsError::Kind::EmptyRun, "run has no records");

  constexpr double kWidth = 900.0;
  constexpr double kHeight = 360.0;
  constexpr double kMargin = 50.0;
  const double t_max = std::max(recs.back().t, 1e-9);
  double e_max = 1e-9;
  for (const auto& r : recs) e_max = std::max(e_max, r.squared_speed_error);
  auto px = [&](double t) { return kMargin + (kWidth - 2 * kMargin) * t / t_max; };
  auto py = [&](double e) { return kHeight - kMargin - (kHeight - 2 * kMargin) * e / e_max; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kMargin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title
      << "</text>\n";
  svg << "<line x1=\"" << kMargin << "\" y1=\"" << py(0) << "\" x2=\"" << kWidth - kMargin << "\" y2=\"" << py(0)
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kMargin << "\" y1=\"" << py(0) << "\" x2=\"" << kMargin << "\" y2=\"" << py(e_max)
      << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - 15
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">t [s] (max " << g6(t_max)
      << ")</text>\n";
  svg << "<text x=\"8\" y=\"" << kMargin - 8 << "\" font-family=\"sans-serif\" font-size=\"12\">sq. speed error (max "
      << g6(e_max) << ")</text>\n";

  svg << "<polyline class=\"error\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (i) svg << ' ';
    svg << g6(px(recs[i].t)) << ',' << g6(py(recs[i].squared_speed_error));
  }
  svg << "\"/>\n";
  for (const auto& r : recs) {
    if (!r.decision.switch_event) continue;
    svg << "<circle class=\"switch\" cx=\"" << g6(px(r.t)) << "\" cy=\"" << g6(py(r.squared_speed_error))
        << "\" r=\"4\" fill=\"red\"><title>" << to_string(r.decision.active) << " @ " << g6(r.t)
        << " s</title></circle>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string emit_comparison(const std::vector<RunSummary>& summaries) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-14s %-9s %12s %12s %10s %12s\n", "strategy", "outcome", "mse", "peak",
                "time_s", "ctrl/tick");
  out << line;
  for (const RunSummary& s : summaries) {
    std::snprintf(line, sizeof line, "%-14s %-9s %12.4f %12.4f %10.2f %12.4f\n", to_string(s.strategy).c_str(),
                  to_string(s.outcome).c_str(), s.mean_squared_speed_error, s.peak_squared_speed_error,
                  s.completion_time, s.mean_controllers_per_tick);
    out << line;
  }
  return out.str();
}

}  // namespace arbiter
