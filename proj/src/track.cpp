#include "arbiter/track.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace arbiter {

Side opposite(Side s) { return static_cast<Side>((static_cast<int>(s) + 2) % 4); }
Side left_of(Side heading) { return static_cast<Side>((static_cast<int>(heading) + 3) % 4); }
Side right_of(Side heading) { return static_cast<Side>((static_cast<int>(heading) + 1) % 4); }

Vec2 side_direction(Side s) {
  switch (s) {
    case Side::N: return {0.0, 1.0};
    case Side::E: return {1.0, 0.0};
    case Side::S: return {0.0, -1.0};
    case Side::W: return {-1.0, 0.0};
  }
  return {};
}

namespace {

void step(Side s, int& row, int& col) {
  switch (s) {
    case Side::N: --row; break;
    case Side::S: ++row; break;
    case Side::E: ++col; break;
    case Side::W: --col; break;
  }
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

bool parse_cell(const std::string& code, MatCell& cell) {
  if (code == ".") {
    cell.kind = CellKind::Empty;
    return true;
  }
  if (code == "X") {
    cell.kind = CellKind::Crossing;
    return true;
  }
  if (code.size() != 2 || code[1] < '0' || code[1] > '3') return false;
  cell.orientation = static_cast<Side>(code[1] - '0');
  switch (code[0]) {
    case 'S': cell.kind = CellKind::Straight; return true;
    case 'L': cell.kind = CellKind::Corner; cell.hand = TurnHand::Left; return true;
    case 'R': cell.kind = CellKind::Corner; cell.hand = TurnHand::Right; return true;
    default: return false;
  }
}

// Sides joined by a corner cell.
std::pair<Side, Side> corner_sides(const MatCell& cell) {
  const Side heading = cell.orientation;
  const Side exit = cell.hand == TurnHand::Left ? left_of(heading) : right_of(heading);
  return {opposite(heading), exit};
}

}  // namespace

std::string MatCell::code() const {
  const char digit = static_cast<char>('0' + static_cast<int>(orientation));
  switch (kind) {
    case CellKind::Empty: return ".";
    case CellKind::Crossing: return "X";
    case CellKind::Straight: return std::string{'S', digit};
    case CellKind::Corner: return std::string{hand == TurnHand::Left ? 'L' : 'R', digit};
  }
  return ".";
}

TrackError::TrackError(Kind kind, int line, int column, const std::string& what)
    : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ")"),
      kind_(kind),
      line_(line),
      column_(column) {}

std::vector<double> cumulative_lengths(const std::vector<Vec2>& polyline) {
  std::vector<double> cum(polyline.size(), 0.0);
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    cum[i] = cum[i - 1] + distance(polyline[i - 1], polyline[i]);
  }
  return cum;
}

Track::Track(std::vector<std::vector<MatCell>> cells, double cell_size)
    : cells_(std::move(cells)), cell_size_(cell_size) {
  if (!(cell_size_ > 0.0)) throw std::invalid_argument("cell_size must be positive");
  for (int r = 0; r < rows(); ++r) {
    for (int c = 0; c < static_cast<int>(cells_[r].size()); ++c) {
      cells_[r][c].row = r;
      cells_[r][c].col = c;
      add_cell_edges(cells_[r][c]);
    }
  }
}

bool Track::in_grid(int row, int col) const {
  return row >= 0 && row < rows() && col >= 0 && col < cols();
}

bool Track::occupied(int row, int col) const {
  return in_grid(row, col) && cells_[row][col].kind != CellKind::Empty;
}

Vec2 Track::cell_center(int row, int col) const {
  return {(col + 0.5) * cell_size_, (rows() - 1 - row + 0.5) * cell_size_};
}

NodeId Track::intern(const NodeKey& key) {
  if (auto it = node_index_.find(key); it != node_index_.end()) return it->second;
  const NodeId id = nodes_.size();
  const Vec2 pos = cell_center(key.row, key.col) + (0.5 * cell_size_) * side_direction(key.heading);
  nodes_.push_back({key, pos});
  node_index_.emplace(key, id);
  out_edges_.emplace_back();
  return id;
}

void Track::add_cell_edges(const MatCell& cell) {
  switch (cell.kind) {
    case CellKind::Empty:
      return;
    case CellKind::Straight: {
      const Side a = cell.orientation;
      add_edge(cell, opposite(a), a);
      add_edge(cell, a, opposite(a));
      return;
    }
    case CellKind::Corner: {
      const auto [a, b] = corner_sides(cell);
      add_edge(cell, a, b);
      add_edge(cell, b, a);
      return;
    }
    case CellKind::Crossing:
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          if (a != b) add_edge(cell, static_cast<Side>(a), static_cast<Side>(b));
        }
      }
      return;
  }
}

void Track::add_edge(const MatCell& cell, Side entry_side, Side exit_side) {
  int nr = cell.row;
  int nc = cell.col;
  step(entry_side, nr, nc);
  // Entering through `entry_side` means leaving the neighbour heading the other way.
  const NodeId from = intern({nr, nc, opposite(entry_side)});
  const NodeId to = intern({cell.row, cell.col, exit_side});

  LaneEdge edge;
  edge.from = from;
  edge.to = to;
  edge.row = cell.row;
  edge.col = cell.col;
  edge.cell_kind = cell.kind;

  const Vec2 center = cell_center(cell.row, cell.col);
  const double half = 0.5 * cell_size_;
  const Vec2 start = center + half * side_direction(entry_side);
  const Vec2 end = center + half * side_direction(exit_side);

  if (exit_side == opposite(entry_side)) {
    edge.turn = EdgeTurn::Straight;
    edge.polyline = {start, end};
  } else {
    const Vec2 heading_in = side_direction(opposite(entry_side));
    const Vec2 heading_out = side_direction(exit_side);
    edge.turn = cross(heading_in, heading_out) > 0.0 ? EdgeTurn::Left : EdgeTurn::Right;
    const Vec2 pivot = center + half * (side_direction(entry_side) + side_direction(exit_side));
    const double a0 = std::atan2(start.y - pivot.y, start.x - pivot.x);
    const double sweep = edge.turn == EdgeTurn::Left ? std::numbers::pi / 2 : -std::numbers::pi / 2;
    edge.polyline.reserve(kArcSegments + 1);
    for (int i = 0; i <= kArcSegments; ++i) {
      const double a = a0 + sweep * i / kArcSegments;
      edge.polyline.push_back({pivot.x + half * std::cos(a), pivot.y + half * std::sin(a)});
    }
    edge.polyline.front() = start;
    edge.polyline.back() = end;
  }
  edge.cumulative = cumulative_lengths(edge.polyline);
  edge.length = edge.cumulative.back();

  out_edges_[from].push_back(edges_.size());
  edges_.push_back(std::move(edge));
}

Track parse_track(std::string_view text, const ParseOptions& options) {
  double cell_size = kDefaultCellSize;
  std::vector<std::vector<MatCell>> cells;
  std::vector<int> row_lines;
  bool seen_content = false;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    const auto tokens = split_ws(line);
    if (tokens.front() == "cellsize") {
      if (seen_content) {
        throw TrackError(TrackError::Kind::Syntax, line_no, 1, "cellsize header must precede rows");
      }
      double value = 0.0;
      const std::string& tok = tokens.size() == 2 ? tokens[1] : std::string{};
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
      if (tokens.size() != 2 || ec != std::errc{} || ptr != tok.data() + tok.size() || !(value > 0.0) ||
          !std::isfinite(value)) {
        throw TrackError(TrackError::Kind::Syntax, line_no, 2, "invalid cellsize");
      }
      cell_size = value;
      seen_content = true;
      continue;
    }
    seen_content = true;

    std::vector<MatCell> row;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      MatCell cell;
      if (!parse_cell(tokens[i], cell)) {
        throw TrackError(TrackError::Kind::Syntax, line_no, static_cast<int>(i + 1),
                         "unknown cell code '" + tokens[i] + "'");
      }
      row.push_back(cell);
    }
    if (!cells.empty() && row.size() != cells.front().size()) {
      throw TrackError(TrackError::Kind::Syntax, line_no,
                       static_cast<int>(std::min(row.size(), cells.front().size()) + 1),
                       "ragged row: expected " + std::to_string(cells.front().size()) + " cells, got " +
                           std::to_string(row.size()));
    }
    cells.push_back(std::move(row));
    row_lines.push_back(line_no);
  }

  const bool any_road = std::any_of(cells.begin(), cells.end(), [](const auto& row) {
    return std::any_of(row.begin(), row.end(), [](const MatCell& c) { return c.kind != CellKind::Empty; });
  });
  if (!any_road) throw TrackError(TrackError::Kind::EmptyTrack, line_no, 0, "track has no road cells");

  Track track(std::move(cells), cell_size);
  if (options.strict) {
    for (int r = 0; r < track.rows(); ++r) {
      for (int c = 0; c < track.cols(); ++c) {
        const MatCell& cell = track.cell(r, c);
        if (cell.kind != CellKind::Corner) continue;
        const auto [a, b] = corner_sides(cell);
        for (Side s : {a, b}) {
          int nr = r;
          int nc = c;
          step(s, nr, nc);
          if (!track.occupied(nr, nc)) {
            throw TrackError(TrackError::Kind::Geometry, row_lines[r], c + 1,
                             "corner " + cell.code() + " opens onto an empty cell");
          }
        }
      }
    }
  }
  return track;
}

std::string serialize_track(const Track& track) {
  std::ostringstream out;
  out.precision(17);
  out << "cellsize " << track.cell_size() << '\n';
  for (const auto& row : track.cells()) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ' ';
      out << row[c].code();
    }
    out << '\n';
  }
  return out.str();
}

LaneProjection project_to_polyline(const std::vector<Vec2>& polyline, const std::vector<double>& cumulative,
                                   const Pose& pose) {
  const Vec2 p = pose.position();
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_seg = 0;
  double best_t = 0.0;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    const Vec2 a = polyline[i];
    const Vec2 ab = polyline[i + 1] - a;
    const double len2 = dot(ab, ab);
    const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    const double d = distance(p, a + t * ab);
    if (d < best) {
      best = d;
      best_seg = i;
      best_t = t;
    }
  }

  auto seg_dir = [&](std::size_t i) {
    const Vec2 v = polyline[i + 1] - polyline[i];
    return (1.0 / norm(v)) * v;
  };
  const std::size_t last_seg = polyline.size() - 2;
  Vec2 tangent = seg_dir(best_seg);
  // At interior vertices the tangent is the bisector of the adjacent segments.
  if (best_t <= 0.0 && best_seg > 0) {
    tangent = tangent + seg_dir(best_seg - 1);
  } else if (best_t >= 1.0 && best_seg < last_seg) {
    tangent = tangent + seg_dir(best_seg + 1);
  }

  const Vec2 a = polyline[best_seg];
  const Vec2 q = a + best_t * (polyline[best_seg + 1] - a);
  const double seg_len = cumulative[best_seg + 1] - cumulative[best_seg];

  LaneProjection out;
  out.centerline_point = q;
  out.arc_position = cumulative[best_seg] + best_t * seg_len;
  out.tangent_heading = std::atan2(tangent.y, tangent.x);
  const double side = cross(tangent, p - q);
  out.lateral_deviation = side >= 0.0 ? best : -best;
  out.heading_error = normalize_angle(pose.heading - out.tangent_heading);
  return out;
}

LaneProjection project_to_lane(const Track& track, EdgeId edge, const Pose& pose) {
  const LaneEdge& e = track.edge(edge);
  return project_to_polyline(e.polyline, e.cumulative, pose);
}

}  // namespace arbiter
