#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gabe/rsg.hpp"

namespace gabe::games {

struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

// Maze rows use '#' for walls, '.' for floor, '1'/'2' for the start cells.
struct GridPDConfig {
  std::vector<std::string> maze;
  double score_reward = 30.0;
  double move_cost = 1.0;

  static GridPDConfig defaults();
  void validate() const;

  Cell start(Seat seat) const;
  bool floor(Cell c) const;
  // Length of the shortest wall-free path between the two start cells.
  int shortest_path() const;
};

enum class GridMove : int { stay = 0, up, down, left, right };

struct GridPDState {
  Cell p1;
  Cell p2;
  bool scored_p1 = false;
  bool scored_p2 = false;
  friend bool operator==(const GridPDState&, const GridPDState&) = default;
};

struct GridPDStep {
  GridPDState next;
  RewardPair rewards;
};

// Simultaneous move. Every directional attempt costs `move_cost`, including a
// bump into a wall. Entering the other player's start cell pays
// `score_reward` once. Players never share a cell or swap cells: a move that
// would do so leaves the mover in place (still paying the cost). A scored
// player only stays, at no cost.
GridPDStep gridpd_step(const GridPDConfig& config, const GridPDState& state, GridMove move_p1,
                       GridMove move_p2);

class GridPDGame final : public Rsg {
 public:
  explicit GridPDGame(GridPDConfig config);

  const GridPDConfig& config() const { return config_; }

  std::string name() const override { return "gridpd"; }
  StateId start_state() const override;
  bool is_goal(const StateId& state) const override;
  std::vector<std::string> actions(const StateId& state, Seat seat) const override;
  std::vector<Transition> transition(const StateId& state, JointAction action) const override;
  RewardPair rewards(const StateId& state, JointAction action) const override;

  static StateId encode(const GridPDState& state);
  static GridPDState decode(const StateId& id);

 private:
  GridPDStep step(const StateId& state, JointAction action) const;

  GridPDConfig config_;
};

}  // namespace gabe::games
