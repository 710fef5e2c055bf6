#include "gabe/games/gridpd.hpp"

#include <cstdio>
#include <deque>

#include "gabe/errors.hpp"

namespace gabe::games {

namespace {

Cell find_char(const std::vector<std::string>& maze, char ch) {
  for (std::size_t r = 0; r < maze.size(); ++r) {
    const auto c = maze[r].find(ch);
    if (c != std::string::npos) return {static_cast<int>(r), static_cast<int>(c)};
  }
  return {-1, -1};
}

Cell shifted(Cell c, GridMove m) {
  switch (m) {
    case GridMove::up: return {c.row - 1, c.col};
    case GridMove::down: return {c.row + 1, c.col};
    case GridMove::left: return {c.row, c.col - 1};
    case GridMove::right: return {c.row, c.col + 1};
    case GridMove::stay: break;
  }
  return c;
}

const char* kMoveLabels[] = {"stay", "up", "down", "left", "right"};

}  // namespace

GridPDConfig GridPDConfig::defaults() {
  GridPDConfig c;
  // Shared bottom corridor (4 moves) and a longer detour through the top row
  // (8 moves). Walking the corridor head-on collides in the middle, so one
  // player has to yield or detour.
  c.maze = {
      "#######",
      "#.....#",
      "#.###.#",
      "#1...2#",
      "#######",
  };
  return c;
}

bool GridPDConfig::floor(Cell c) const {
  if (c.row < 0 || c.row >= static_cast<int>(maze.size())) return false;
  if (c.col < 0 || c.col >= static_cast<int>(maze[c.row].size())) return false;
  return maze[c.row][c.col] != '#';
}

Cell GridPDConfig::start(Seat seat) const {
  return find_char(maze, seat == Seat::first ? '1' : '2');
}

int GridPDConfig::shortest_path() const {
  const Cell from = start(Seat::first);
  const Cell to = start(Seat::second);
  std::vector<std::vector<int>> dist(maze.size());
  for (std::size_t r = 0; r < maze.size(); ++r) dist[r].assign(maze[r].size(), -1);
  std::deque<Cell> q{from};
  dist[from.row][from.col] = 0;
  while (!q.empty()) {
    const Cell c = q.front();
    q.pop_front();
    if (c == to) return dist[c.row][c.col];
    for (GridMove m : {GridMove::up, GridMove::down, GridMove::left, GridMove::right}) {
      const Cell n = shifted(c, m);
      if (floor(n) && dist[n.row][n.col] < 0) {
        dist[n.row][n.col] = dist[c.row][c.col] + 1;
        q.push_back(n);
      }
    }
  }
  return -1;
}

void GridPDConfig::validate() const {
  if (maze.empty()) throw ConfigError("maze must have at least one row");
  for (std::size_t r = 0; r < maze.size(); ++r) {
    for (char ch : maze[r]) {
      if (ch != '#' && ch != '.' && ch != '1' && ch != '2') {
        throw ConfigError("maze[" + std::to_string(r) + "] contains invalid character '" +
                          std::string(1, ch) + "'");
      }
    }
  }
  if (start(Seat::first).row < 0) throw ConfigError("maze has no start cell '1'");
  if (start(Seat::second).row < 0) throw ConfigError("maze has no start cell '2'");
  if (shortest_path() < 0) throw ConfigError("maze: start cells are not connected");
  if (!(move_cost >= 0.0)) throw ConfigError("move_cost must be >= 0");
}

GridPDStep gridpd_step(const GridPDConfig& config, const GridPDState& state, GridMove move_p1,
                       GridMove move_p2) {
  if (state.scored_p1 && move_p1 != GridMove::stay) {
    throw PreconditionError("player 1 has scored and may only stay");
  }
  if (state.scored_p2 && move_p2 != GridMove::stay) {
    throw PreconditionError("player 2 has scored and may only stay");
  }
  GridPDStep out;
  out.next = state;
  if (move_p1 != GridMove::stay) out.rewards.first -= config.move_cost;
  if (move_p2 != GridMove::stay) out.rewards.second -= config.move_cost;

  Cell target1 = shifted(state.p1, move_p1);
  Cell target2 = shifted(state.p2, move_p2);
  if (!config.floor(target1)) target1 = state.p1;
  if (!config.floor(target2)) target2 = state.p2;
  // Players never share a cell and never swap cells. A blocked mover stays,
  // which can block the other in turn, so resolve until stable.
  for (bool changed = true; changed;) {
    changed = false;
    const bool swap = target1 == state.p2 && target2 == state.p1 && !(target1 == target2);
    if (target1 == target2 || swap) {
      if (!(target1 == state.p1)) {
        target1 = state.p1;
        changed = true;
      }
      if (!(target2 == state.p2)) {
        target2 = state.p2;
        changed = true;
      }
    }
  }
  out.next.p1 = target1;
  out.next.p2 = target2;

  if (!state.scored_p1 && target1 == config.start(Seat::second)) {
    out.next.scored_p1 = true;
    out.rewards.first += config.score_reward;
  }
  if (!state.scored_p2 && target2 == config.start(Seat::first)) {
    out.next.scored_p2 = true;
    out.rewards.second += config.score_reward;
  }
  return out;
}

GridPDGame::GridPDGame(GridPDConfig config) : config_(std::move(config)) { config_.validate(); }

StateId GridPDGame::encode(const GridPDState& s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%d,%d;%d,%d;%d%d", s.p1.row, s.p1.col, s.p2.row, s.p2.col,
                s.scored_p1 ? 1 : 0, s.scored_p2 ? 1 : 0);
  return StateId(buf);
}

GridPDState GridPDGame::decode(const StateId& id) {
  GridPDState s;
  int a = 0, b = 0;
  std::sscanf(id.bytes().c_str(), "%d,%d;%d,%d;%1d%1d", &s.p1.row, &s.p1.col, &s.p2.row,
              &s.p2.col, &a, &b);
  s.scored_p1 = a != 0;
  s.scored_p2 = b != 0;
  return s;
}

StateId GridPDGame::start_state() const {
  return encode({config_.start(Seat::first), config_.start(Seat::second), false, false});
}

bool GridPDGame::is_goal(const StateId& state) const {
  const GridPDState s = decode(state);
  return s.scored_p1 && s.scored_p2;
}

std::vector<std::string> GridPDGame::actions(const StateId& state, Seat seat) const {
  const GridPDState s = decode(state);
  const bool scored = seat == Seat::first ? s.scored_p1 : s.scored_p2;
  if (scored) return {"stay"};
  return {std::begin(kMoveLabels), std::end(kMoveLabels)};
}

GridPDStep GridPDGame::step(const StateId& state, JointAction action) const {
  return gridpd_step(config_, decode(state), static_cast<GridMove>(action.first),
                     static_cast<GridMove>(action.second));
}

std::vector<Transition> GridPDGame::transition(const StateId& state, JointAction action) const {
  return {Transition{encode(step(state, action).next), 1.0}};
}

RewardPair GridPDGame::rewards(const StateId& state, JointAction action) const {
  return step(state, action).rewards;
}

}  // namespace gabe::games
