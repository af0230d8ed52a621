#include "arbiter/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <tuple>

namespace arbiter {

std::string to_string(InstructionKind kind) {
  switch (kind) {
    case InstructionKind::TurnLeft: return "TurnLeft";
    case InstructionKind::TurnRight: return "TurnRight";
    case InstructionKind::CrossCrossing: return "CrossCrossing";
    case InstructionKind::Stop: return "Stop";
  }
  return "?";
}

std::string to_string(CrossingExit exit) {
  switch (exit) {
    case CrossingExit::Straight: return "Straight";
    case CrossingExit::Left: return "Left";
    case CrossingExit::Right: return "Right";
  }
  return "?";
}

std::string to_string(PlanningError::Kind kind) {
  switch (kind) {
    case PlanningError::Kind::NoPathExists: return "NoPathExists";
    case PlanningError::Kind::StartOffTrack: return "StartOffTrack";
    case PlanningError::Kind::GoalOffTrack: return "GoalOffTrack";
    case PlanningError::Kind::NodeNotOnRoute: return "NodeNotOnRoute";
    case PlanningError::Kind::RouteDeparture: return "RouteDeparture";
  }
  return "?";
}

namespace {

constexpr double kArcTolerance = 1e-9;

int instruction_weight(const LaneEdge& e) { return e.cell_kind == CellKind::Straight ? 0 : 1; }

struct Anchor {
  EdgeId edge;
  double arc;  // along the edge
  double lateral;
  double heading_error;
};

struct Label {
  double length = std::numeric_limits<double>::infinity();
  int instructions = 0;
  std::optional<NodeId> pred_node;
  EdgeId pred_edge = 0;
  bool done = false;
};

// Lexicographic (length within tolerance, instruction count, tiebreak key).
template <typename Key>
bool better(double len_a, int instr_a, const Key& key_a, double len_b, int instr_b, const Key& key_b) {
  if (len_a < len_b - kArcTolerance) return true;
  if (len_a > len_b + kArcTolerance) return false;
  if (instr_a != instr_b) return instr_a < instr_b;
  return key_a < key_b;
}

NodeKey sentinel_key() {
  return {std::numeric_limits<int>::min(), std::numeric_limits<int>::min(), Side::N};
}

void append_polyline(std::vector<Vec2>& pts, std::vector<double>& arcs, const LaneEdge& e, double offset) {
  for (std::size_t i = 0; i < e.polyline.size(); ++i) {
    if (!pts.empty() && i == 0) continue;  // shared junction vertex
    pts.push_back(e.polyline[i]);
    arcs.push_back(offset + e.cumulative[i]);
  }
}

Vec2 lerp_at(const std::vector<Vec2>& pts, const std::vector<double>& arcs, double s) {
  auto it = std::upper_bound(arcs.begin(), arcs.end(), s);
  std::size_t i = it == arcs.begin() ? 0 : static_cast<std::size_t>(it - arcs.begin()) - 1;
  i = std::min(i, pts.size() - 2);
  const double span = arcs[i + 1] - arcs[i];
  const double t = span > 0.0 ? std::clamp((s - arcs[i]) / span, 0.0, 1.0) : 0.0;
  return pts[i] + t * (pts[i + 1] - pts[i]);
}

void build_path(const Track& track, Route& route) {
  std::vector<Vec2> pts;
  std::vector<double> arcs;
  for (std::size_t i = 0; i < route.edges.size(); ++i) {
    append_polyline(pts, arcs, track.edge(route.edges[i]), route.edge_start_arc[i]);
  }
  const double total = route.total_length;
  route.path.clear();
  route.path_arc.clear();
  route.path.push_back(lerp_at(pts, arcs, 0.0));
  route.path_arc.push_back(0.0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (arcs[i] > kArcTolerance && arcs[i] < total - kArcTolerance) {
      route.path.push_back(pts[i]);
      route.path_arc.push_back(arcs[i]);
    }
  }
  route.path.push_back(lerp_at(pts, arcs, total));
  route.path_arc.push_back(total);
  if (total <= kArcTolerance) {
    // Degenerate zero-length route: keep a tangent so projection stays defined.
    const LaneEdge& e = track.edge(route.edges.back());
    route.path.back() = route.path.front() + 1e-6 * (e.polyline.back() - e.polyline.front());
    route.path_arc.back() = 0.0;
  }
}

void build_instructions(const Track& track, Route& route) {
  for (std::size_t i = 0; i < route.edges.size(); ++i) {
    const LaneEdge& e = track.edge(route.edges[i]);
    if (e.cell_kind == CellKind::Straight) continue;
    DrivingInstruction instr;
    if (e.cell_kind == CellKind::Corner) {
      instr.kind = e.turn == EdgeTurn::Left ? InstructionKind::TurnLeft : InstructionKind::TurnRight;
    } else {
      instr.kind = InstructionKind::CrossCrossing;
      instr.crossing_exit = e.turn == EdgeTurn::Straight ? CrossingExit::Straight
                            : e.turn == EdgeTurn::Left   ? CrossingExit::Left
                                                         : CrossingExit::Right;
    }
    instr.anchor = e.from;
    instr.exit = e.to;
    instr.anchor_arc = std::max(route.edge_start_arc[i], 0.0);
    instr.exit_arc = std::min(route.edge_start_arc[i] + e.length, route.total_length);
    if (instr.exit_arc - instr.anchor_arc <= kArcTolerance) continue;
    route.instructions.push_back(instr);
  }
  DrivingInstruction stop;
  stop.kind = InstructionKind::Stop;
  stop.anchor_arc = route.total_length;
  stop.exit_arc = route.total_length;
  route.instructions.push_back(stop);
}

}  // namespace

std::optional<double> Route::node_arc(const Track& track, NodeId node, double from_arc) const {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const LaneEdge& e = track.edge(edges[i]);
    const double start = edge_start_arc[i];
    const double end = start + e.length;
    if (e.from == node && start >= from_arc - kArcTolerance && start >= -kArcTolerance) return start;
    if (e.to == node && end >= from_arc - kArcTolerance && end <= total_length + kArcTolerance) return end;
  }
  return std::nullopt;
}

std::size_t Route::edge_index_at(double s) const {
  auto it = std::upper_bound(edge_start_arc.begin(), edge_start_arc.end(), s);
  if (it == edge_start_arc.begin()) return 0;
  return static_cast<std::size_t>(it - edge_start_arc.begin()) - 1;
}

Route plan_route(const Track& track, const Pose& start, Vec2 goal) {
  const double reach = 0.5 * track.cell_size() + kArcTolerance;
  const auto& edges = track.edges();

  std::optional<Anchor> start_anchor;
  std::vector<Anchor> goal_candidates;
  double goal_best = std::numeric_limits<double>::infinity();
  for (EdgeId id = 0; id < edges.size(); ++id) {
    const LaneProjection sp = project_to_lane(track, id, start);
    if (std::abs(sp.lateral_deviation) <= reach && std::abs(sp.heading_error) < std::numbers::pi / 2) {
      const Anchor cand{id, sp.arc_position, std::abs(sp.lateral_deviation), std::abs(sp.heading_error)};
      if (!start_anchor || cand.lateral < start_anchor->lateral - kArcTolerance ||
          (cand.lateral <= start_anchor->lateral + kArcTolerance &&
           cand.heading_error < start_anchor->heading_error)) {
        start_anchor = cand;
      }
    }
    const LaneProjection gp = project_to_lane(track, id, Pose(goal.x, goal.y, 0.0));
    const double gd = std::abs(gp.lateral_deviation);
    if (gd <= reach) {
      goal_candidates.push_back({id, gp.arc_position, gd, 0.0});
      goal_best = std::min(goal_best, gd);
    }
  }
  if (!start_anchor) throw PlanningError(PlanningError::Kind::StartOffTrack, "start pose is not on a lane");
  if (goal_candidates.empty()) throw PlanningError(PlanningError::Kind::GoalOffTrack, "goal is not on a lane");
  std::erase_if(goal_candidates, [&](const Anchor& a) { return a.lateral > goal_best + 1e-6; });

  const LaneEdge& e0 = track.edge(start_anchor->edge);
  const double s0 = start_anchor->arc;

  // Uniform-cost search over lane ports.
  std::vector<Label> labels(track.nodes().size());
  using Entry = std::tuple<double, int, NodeKey, NodeId>;
  auto cmp = [](const Entry& a, const Entry& b) {
    return better(std::get<0>(b), std::get<1>(b), std::get<2>(b), std::get<0>(a), std::get<1>(a),
                  std::get<2>(a));
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> open(cmp);

  labels[e0.to] = {e0.length - s0, instruction_weight(e0), std::nullopt, start_anchor->edge, false};
  open.emplace(labels[e0.to].length, labels[e0.to].instructions, track.node(e0.to).key, e0.to);
  while (!open.empty()) {
    const auto [len, instr, key, u] = open.top();
    open.pop();
    if (labels[u].done) continue;
    labels[u].done = true;
    for (EdgeId eid : track.out_edges(u)) {
      const LaneEdge& e = track.edge(eid);
      Label& next = labels[e.to];
      if (next.done) continue;
      const double cand_len = len + e.length;
      const int cand_instr = instr + instruction_weight(e);
      const NodeKey pred_key = next.pred_node ? track.node(*next.pred_node).key : sentinel_key();
      if (std::isinf(next.length) || better(cand_len, cand_instr, key, next.length, next.instructions, pred_key)) {
        next = {cand_len, cand_instr, u, eid, false};
        open.emplace(cand_len, cand_instr, track.node(e.to).key, e.to);
      }
    }
  }

  // Pick the best way of reaching any goal candidate.
  struct Finish {
    double length;
    int instructions;
    EdgeId goal_edge;
    double goal_arc;
    bool direct;
  };
  std::optional<Finish> best;
  auto consider = [&](const Finish& f) {
    if (!best || better(f.length, f.instructions, f.goal_edge, best->length, best->instructions, best->goal_edge)) {
      best = f;
    }
  };
  for (const Anchor& g : goal_candidates) {
    if (g.edge == start_anchor->edge && g.arc >= s0 - kArcTolerance) {
      consider({std::max(g.arc - s0, 0.0), instruction_weight(e0), g.edge, g.arc, true});
    }
    const Label& at = labels[track.edge(g.edge).from];
    if (!std::isinf(at.length)) {
      consider({at.length + g.arc, at.instructions + instruction_weight(track.edge(g.edge)), g.edge, g.arc, false});
    }
  }
  if (!best) throw PlanningError(PlanningError::Kind::NoPathExists, "goal is unreachable from start");

  Route route;
  if (best->direct) {
    route.edges = {best->goal_edge};
  } else {
    std::vector<EdgeId> rev{best->goal_edge};
    NodeId n = track.edge(best->goal_edge).from;
    while (true) {
      const Label& l = labels[n];
      rev.push_back(l.pred_edge);
      if (!l.pred_node) break;
      n = *l.pred_node;
    }
    route.edges.assign(rev.rbegin(), rev.rend());
  }
  double offset = -s0;
  for (EdgeId id : route.edges) {
    route.edge_start_arc.push_back(offset);
    offset += track.edge(id).length;
  }
  route.total_length = best->length;
  build_path(track, route);
  build_instructions(track, route);
  return route;
}

double arc_distance(const Track& track, const Route& route, double from, NodeId to_node) {
  const auto arc = route.node_arc(track, to_node, from);
  if (!arc) throw PlanningError(PlanningError::Kind::NodeNotOnRoute, "node is not ahead on the route");
  return std::max(*arc - from, 0.0);
}

RouteProjection project_on_route(const Track& track, const Route& route, const Pose& pose, double hint_arc,
                                 double window) {
  (void)track;
  const auto& arcs = route.path_arc;
  const double lo = hint_arc - window;
  const double hi = hint_arc + window;
  std::size_t first = 0;
  while (first + 2 < arcs.size() && arcs[first + 1] < lo) ++first;
  std::size_t last = first + 1;
  while (last + 1 < arcs.size() && arcs[last] < hi) ++last;

  std::vector<Vec2> pts(route.path.begin() + first, route.path.begin() + last + 1);
  std::vector<double> cum(arcs.begin() + first, arcs.begin() + last + 1);
  const double base = cum.front();
  for (double& c : cum) c -= base;

  RouteProjection out;
  out.lane = project_to_polyline(pts, cum, pose);
  out.lane.arc_position += base;
  out.edge_index = static_cast<std::ptrdiff_t>(route.edge_index_at(out.lane.arc_position));
  return out;
}

RouteProgress initial_progress(const Route& route) {
  RouteProgress p;
  RouteProjection proj;
  proj.lane.arc_position = 0.0;
  proj.edge_index = 0;
  return update_progress(route, p, proj);
}

RouteProgress update_progress(const Route& route, const RouteProgress& progress,
                              const RouteProjection& projection) {
  if (projection.edge_index < 0 || static_cast<std::size_t>(projection.edge_index) >= route.edges.size()) {
    throw PlanningError(PlanningError::Kind::RouteDeparture, "vehicle left the planned route");
  }
  RouteProgress next = progress;
  const double s = projection.lane.arc_position;
  next.arc_position = s;
  const auto& instr = route.instructions;
  std::size_t idx = progress.next_instruction_index;
  while (idx + 1 < instr.size() && s >= instr[idx].exit_arc - kArcTolerance) ++idx;
  next.next_instruction_index = idx;
  next.in_maneuver = s >= instr[idx].anchor_arc - kArcTolerance;
  next.distance_to_next = next.in_maneuver ? 0.0 : instr[idx].anchor_arc - s;
  return next;
}

}  // namespace arbiter
