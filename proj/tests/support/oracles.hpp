#pragma once

// Test-only oracles. These deliberately avoid the library's planner and
// metrics code paths so they can check them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "arbiter/planner.hpp"
#include "arbiter/track.hpp"

namespace arbiter::testing {

struct CsvRow {
  std::vector<double> num;  // every numeric column, NaN for `active`
  std::string active;
};

inline std::vector<CsvRow> parse_csv(const std::string& text, std::string* header = nullptr) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    CsvRow row;
    std::stringstream ls(line);
    std::string cell;
    int col = 0;
    while (std::getline(ls, cell, ',')) {
      if (col == 8) {
        row.active = cell;
        row.num.push_back(std::numeric_limits<double>::quiet_NaN());
      } else {
        row.num.push_back(std::stod(cell));
      }
      ++col;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Column indices in the telemetry CSV.
enum CsvCol { kT = 0, kX, kY, kHeading, kSpeed, kVCmd, kSteerCmd, kSteerActual, kActive, kCoeff, kDNext, kSqErr,
              kLatDev, kSwitch, kControllers };

/// Minimum route length from a point on `start_edge` (at `s0`) to a point on
/// `goal_edge` (at `sg`), by depth-first enumeration of node-simple paths.
inline double brute_force_min_length(const Track& track, EdgeId start_edge, double s0, EdgeId goal_edge,
                                     double sg) {
  double best = std::numeric_limits<double>::infinity();
  if (start_edge == goal_edge && sg >= s0 - 1e-9) best = std::max(sg - s0, 0.0);
  const LaneEdge& e0 = track.edge(start_edge);
  std::vector<char> on_path(track.nodes().size(), 0);

  auto dfs = [&](auto&& self, NodeId u, double len) -> void {
    if (u == track.edge(goal_edge).from) best = std::min(best, len + sg);
    on_path[u] = 1;
    for (EdgeId eid : track.out_edges(u)) {
      const LaneEdge& e = track.edge(eid);
      if (!on_path[e.to]) self(self, e.to, len + e.length);
    }
    on_path[u] = 0;
  };
  dfs(dfs, e0.to, e0.length - s0);
  return best;
}

/// Point at arc `s` along an edge's polyline.
inline Vec2 point_along(const LaneEdge& e, double s) {
  for (std::size_t i = 0; i + 1 < e.polyline.size(); ++i) {
    const double len = distance(e.polyline[i], e.polyline[i + 1]);
    if (s <= len) return e.polyline[i] + (s / len) * (e.polyline[i + 1] - e.polyline[i]);
    s -= len;
  }
  return e.polyline.back();
}

/// Shortest planned length versus the brute-force minimum for one start/goal
/// pair placed at arcs `s0` and `sg` of the given edges. Returns
/// {planner, oracle}; either is infinity when no route exists.
inline std::pair<double, double> planner_vs_oracle(const Track& t, EdgeId se, double s0, EdgeId ge, double sg) {
  const Vec2 sp = point_along(t.edge(se), s0);
  const Pose start(sp.x, sp.y, project_to_lane(t, se, Pose(sp.x, sp.y, 0)).tangent_heading);
  const Vec2 goal = point_along(t.edge(ge), sg);
  double best = std::numeric_limits<double>::infinity();
  for (EdgeId g = 0; g < t.edges().size(); ++g) {
    const auto gp = project_to_lane(t, g, Pose(goal.x, goal.y, 0));
    if (std::abs(gp.lateral_deviation) < 1e-6) best = std::min(best, brute_force_min_length(t, se, s0, g, gp.arc_position));
  }
  double planned = std::numeric_limits<double>::infinity();
  try {
    planned = plan_route(t, start, goal).total_length;
  } catch (const PlanningError& e) {
    if (e.kind() != PlanningError::Kind::NoPathExists) throw;
  }
  return {planned, best};
}

/// Random grid mixing straights, corners and a bounded number of crossings.
inline std::string random_grid(std::mt19937& rng, int rows, int cols, int max_crossings) {
  static const char* kCodes[] = {".", ".", "S0", "S1", "S2", "S3", "L0", "L1", "L2", "L3", "R0", "R1", "R2", "R3"};
  std::uniform_int_distribution<int> pick(0, static_cast<int>(std::size(kCodes)) - 1);
  std::uniform_int_distribution<int> coin(0, 9);
  int crossings = 0;
  std::ostringstream out;
  out << "cellsize 10\n";
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c) out << ' ';
      if (crossings < max_crossings && coin(rng) == 0) {
        out << 'X';
        ++crossings;
      } else {
        out << kCodes[pick(rng)];
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace arbiter::testing
