#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "arbiter/geometry.hpp"

namespace arbiter {

enum class Side { N = 0, E = 1, S = 2, W = 3 };

Side opposite(Side s);
Side left_of(Side heading);
Side right_of(Side heading);
/// Unit vector pointing out of a cell through `s` (north is +y).
Vec2 side_direction(Side s);

enum class CellKind { Straight, Corner, Crossing, Empty };
enum class TurnHand { Left, Right };

/// One grid tile. `orientation` is the axis for straights and the entry
/// heading for corners; crossings and empty cells ignore it.
struct MatCell {
  CellKind kind = CellKind::Empty;
  Side orientation = Side::N;
  TurnHand hand = TurnHand::Left;  // corners only
  int row = 0;
  int col = 0;

  std::string code() const;
  friend bool operator==(const MatCell&, const MatCell&) = default;
};

/// A lane port: the midpoint of a cell side crossed while heading `heading`.
/// Canonically keyed by the cell being left, so neighbouring cells share it.
struct NodeKey {
  int row = 0;
  int col = 0;
  Side heading = Side::N;

  friend auto operator<=>(const NodeKey&, const NodeKey&) = default;
};

enum class EdgeTurn { Straight, Left, Right };

using NodeId = std::size_t;
using EdgeId = std::size_t;

struct LaneNode {
  NodeKey key;
  Vec2 position;
};

/// Directed centerline through one cell, from an entry port to an exit port.
struct LaneEdge {
  NodeId from = 0;
  NodeId to = 0;
  int row = 0;
  int col = 0;
  CellKind cell_kind = CellKind::Straight;
  EdgeTurn turn = EdgeTurn::Straight;
  std::vector<Vec2> polyline;
  std::vector<double> cumulative;  // arc length at each polyline vertex
  double length = 0.0;
};

struct LaneProjection {
  double lateral_deviation = 0.0;  // left of travel is positive
  double heading_error = 0.0;
  double arc_position = 0.0;
  Vec2 centerline_point;
  double tangent_heading = 0.0;
};

/// Samples per quarter arc.
inline constexpr int kArcSegments = 32;
inline constexpr double kDefaultCellSize = 10.0;

class TrackError : public std::runtime_error {
 public:
  enum class Kind { Syntax, Geometry, EmptyTrack };

  TrackError(Kind kind, int line, int column, const std::string& what);

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  Kind kind_;
  int line_;
  int column_;
};

struct ParseOptions {
  /// Reject corners whose sides face an empty cell or the grid boundary.
  bool strict = false;
};

class Track {
 public:
  Track(std::vector<std::vector<MatCell>> cells, double cell_size);

  int rows() const { return static_cast<int>(cells_.size()); }
  int cols() const { return cells_.empty() ? 0 : static_cast<int>(cells_.front().size()); }
  double cell_size() const { return cell_size_; }
  const MatCell& cell(int row, int col) const { return cells_[row][col]; }
  const std::vector<std::vector<MatCell>>& cells() const { return cells_; }
  bool in_grid(int row, int col) const;
  bool occupied(int row, int col) const;

  Vec2 cell_center(int row, int col) const;

  const std::vector<LaneNode>& nodes() const { return nodes_; }
  const std::vector<LaneEdge>& edges() const { return edges_; }
  const LaneNode& node(NodeId id) const { return nodes_.at(id); }
  const LaneEdge& edge(EdgeId id) const { return edges_.at(id); }
  const std::vector<EdgeId>& out_edges(NodeId id) const { return out_edges_.at(id); }

 private:
  NodeId intern(const NodeKey& key);
  void add_cell_edges(const MatCell& cell);
  void add_edge(const MatCell& cell, Side entry_side, Side exit_side);

  std::vector<std::vector<MatCell>> cells_;
  double cell_size_;
  std::vector<LaneNode> nodes_;
  std::map<NodeKey, NodeId> node_index_;
  std::vector<LaneEdge> edges_;
  std::vector<std::vector<EdgeId>> out_edges_;
};

Track parse_track(std::string_view text, const ParseOptions& options = {});
std::string serialize_track(const Track& track);

/// Nearest point on an edge polyline plus signed errors relative to it.
/// `arc_position` is measured from the start of the edge.
LaneProjection project_to_lane(const Track& track, EdgeId edge, const Pose& pose);

/// Same as above but over any polyline with precomputed cumulative lengths.
LaneProjection project_to_polyline(const std::vector<Vec2>& polyline,
                                   const std::vector<double>& cumulative,
                                   const Pose& pose);

std::vector<double> cumulative_lengths(const std::vector<Vec2>& polyline);

}  // namespace arbiter
