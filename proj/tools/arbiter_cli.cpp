// Command-line entry point: plan, simulate and compare behavior selectors on
// a fixed start/goal scenario.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "arbiter/metrics.hpp"
#include "arbiter/planner.hpp"
#include "arbiter/scenario.hpp"
#include "arbiter/sim.hpp"
#include "arbiter/track.hpp"

namespace fs = std::filesystem;
using namespace arbiter;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPlanning = 2;

struct Options {
  std::string scenario_path;
  std::string track_path;
  std::vector<double> start;
  std::vector<double> goal;
  std::string strategy;
  std::string coeff;
  std::string blend;
  std::optional<double> turn_distance;
  std::optional<double> dt;
  std::string out_dir;
  bool seedless = false;
};

struct Loaded {
  Scenario scenario;
  Track track;
  RunConfig config;
};

int exit_code(RunStatus status) {
  switch (status) {
    case RunStatus::Success: return 0;
    case RunStatus::OffRoute: return 3;
    case RunStatus::Timeout: return 4;
  }
  return kExitUsage;
}

Loaded load(const Options& opt) {
  Scenario sc;
  if (!opt.scenario_path.empty()) {
    sc = load_scenario(opt.scenario_path);
  } else if (opt.track_path.empty() || opt.start.size() != 3 || opt.goal.size() != 2) {
    throw ScenarioError("need --scenario, or --track with --start x,y,heading and --goal x,y");
  }
  if (!opt.track_path.empty()) sc.track_path = opt.track_path;
  if (opt.start.size() == 3) sc.start = Pose(opt.start[0], opt.start[1], opt.start[2]);
  if (opt.goal.size() == 2) sc.goal = {opt.goal[0], opt.goal[1]};

  if (!opt.out_dir.empty()) {
    sc.output_dir = opt.out_dir;
  } else if (sc.output_dir.empty()) {
    const char* env = std::getenv("ARBITER_OUT");
    sc.output_dir = env && *env ? fs::path(env) : fs::path("out");
  }

  Track track = parse_track(read_file(sc.track_path));
  RunConfig config = RunConfig::for_cell_size(track.cell_size());
  apply_overrides(config, sc.overrides);
  if (!opt.strategy.empty()) apply_override(config, "selector.strategy", opt.strategy);
  if (!opt.coeff.empty()) config.selector.coefficient_mode = coefficient_mode_from_string(opt.coeff);
  if (!opt.blend.empty()) config.selector.blend_mode = blend_mode_from_string(opt.blend);
  if (opt.turn_distance) config.selector.turn_distance = *opt.turn_distance;
  if (opt.dt) config.sim.dt = *opt.dt;
  return {std::move(sc), std::move(track), config};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw MetricsError(MetricsError::Kind::IoError, "cannot write " + path.string());
}

RunSummary write_artifacts(const fs::path& dir, Strategy strategy, const RunOutcome& outcome) {
  fs::create_directories(dir);
  const std::string stem = "run_" + to_string(strategy);
  write_text(dir / (stem + ".csv"), emit_csv(outcome));
  write_text(dir / (stem + ".svg"), emit_chart(outcome, stem + " (" + to_string(outcome.status) + ")"));
  return summarize(outcome, strategy);
}

int cmd_plan(const Options& opt) {
  const Loaded l = load(opt);
  Route route;
  try {
    route = plan_route(l.track, l.scenario.start, l.scenario.goal);
  } catch (const PlanningError& e) {
    std::cerr << to_string(e.kind()) << ": " << e.what() << '\n';
    return kExitPlanning;
  }
  for (std::size_t i = 0; i < route.instructions.size(); ++i) {
    const auto& in = route.instructions[i];
    std::printf("%zu %s at %.3fm\n", i, to_string(in.kind).c_str(), in.anchor_arc);
  }
  return kExitOk;
}

int cmd_simulate(const Options& opt) {
  const Loaded l = load(opt);
  Route route;
  try {
    route = plan_route(l.track, l.scenario.start, l.scenario.goal);
  } catch (const PlanningError& e) {
    std::cerr << to_string(e.kind()) << ": " << e.what() << '\n';
    return kExitPlanning;
  }
  const RunOutcome outcome = run_simulation(l.track, route, l.scenario.start, l.config);
  const RunSummary summary = write_artifacts(l.scenario.output_dir, l.config.selector.strategy, outcome);
  std::cout << emit_comparison({summary});
  for (const SwitchPeak& p : summary.post_switch_peak_errors) {
    std::printf("switch %.2fs %s -> %s peak %.4f\n", p.t, to_string(p.from).c_str(), to_string(p.to).c_str(),
                p.peak);
  }
  return exit_code(outcome.status);
}

int cmd_compare(const Options& opt) {
  const Loaded l = load(opt);
  Route route;
  try {
    route = plan_route(l.track, l.scenario.start, l.scenario.goal);
  } catch (const PlanningError& e) {
    std::cerr << to_string(e.kind()) << ": " << e.what() << '\n';
    return kExitPlanning;
  }
  std::vector<std::future<RunOutcome>> runs;
  for (Strategy s : kAllStrategies) {
    RunConfig cfg = l.config;
    cfg.selector.strategy = s;
    runs.push_back(std::async(std::launch::async, [&l, &route, cfg] {
      return run_simulation(l.track, route, l.scenario.start, cfg);
    }));
  }
  std::vector<RunSummary> summaries;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    summaries.push_back(write_artifacts(l.scenario.output_dir, kAllStrategies[i], runs[i].get()));
  }
  const std::string table = emit_comparison(summaries);
  write_text(l.scenario.output_dir / "comparison.txt", table);
  std::cout << table;
  return kExitOk;
}

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("--scenario", opt.scenario_path, "Scenario file (key=value)");
  sub->add_option("--track", opt.track_path, "Track file; overrides the scenario's");
  sub->add_option("--start", opt.start, "Start pose x,y,heading")->delimiter(',')->expected(3);
  sub->add_option("--goal", opt.goal, "Goal position x,y")->delimiter(',')->expected(2);
  sub->add_option("--strategy", opt.strategy, "basic|transition|interpolation|hybrid")
      ->check(CLI::IsMember({"basic", "transition", "interpolation", "hybrid"}));
  sub->add_option("--coeff", opt.coeff, "Interpolation coefficient: turn|distance")
      ->check(CLI::IsMember({"turn", "distance"}));
  sub->add_option("--blend", opt.blend, "Blend: speed|both")->check(CLI::IsMember({"speed", "both"}));
  sub->add_option("--turn-distance", opt.turn_distance, "Turn Distance in metres")->check(CLI::PositiveNumber);
  sub->add_option("--dt", opt.dt, "Simulation step in seconds")->check(CLI::PositiveNumber);
  sub->add_option("--out-dir", opt.out_dir, "Artifact directory (default $ARBITER_OUT or ./out)");
  sub->add_flag("--seedless", opt.seedless, "Accepted for scripting; runs never use randomness");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Behavior selector experiments"};
  app.require_subcommand(1);
  Options opt;
  auto* plan = app.add_subcommand("plan", "Print the driving instructions for a scenario");
  auto* simulate = app.add_subcommand("simulate", "Run one strategy and write CSV/SVG telemetry");
  auto* compare = app.add_subcommand("compare", "Run all four strategies and print a comparison");
  for (auto* sub : {plan, simulate, compare}) add_common(sub, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }
  try {
    if (plan->parsed()) return cmd_plan(opt);
    if (simulate->parsed()) return cmd_simulate(opt);
    return cmd_compare(opt);
  } catch (const TrackError& e) {
    std::cerr << "track error: " << e.what() << '\n';
  } catch (const ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kExitUsage;
}
