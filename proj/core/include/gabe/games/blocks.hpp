#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gabe/rsg.hpp"

namespace gabe::games {

enum class Shape : std::uint8_t { square, triangle, circle };
enum class Color : std::uint8_t { red, blue, yellow };

std::string to_string(Shape shape);
std::string to_string(Color color);
Shape parse_shape(const std::string& text);  // throws ConfigError
Color parse_color(const std::string& text);  // throws ConfigError

struct Block {
  Shape shape = Shape::square;
  Color color = Color::red;
  double number = 1.0;
  friend bool operator==(const Block&, const Block&) = default;
};

struct BlockConfig {
  std::vector<Block> blocks;
  int picks_per_player = 3;
  Seat first_mover = Seat::first;

  // Eight blocks (three squares, three triangles, two circles) whose
  // subgame-perfect outcome is (18, 18), squares sum to 40 and triangles to 10.
  // The square/triangle alternation (25 each) is also the egalitarian outcome.
  static BlockConfig defaults();
  void validate() const;
};

// Hands and the remaining pool are bitmasks over `BlockConfig::blocks`.
struct BlockState {
  std::uint32_t hand_p1 = 0;
  std::uint32_t hand_p2 = 0;
  friend bool operator==(const BlockState&, const BlockState&) = default;
};

struct BlockStep {
  BlockState next;
  RewardPair rewards;
};

// Seat to move in `state`; the first mover acts whenever hand sizes are equal.
Seat block_mover(const BlockConfig& config, const BlockState& state);
bool block_is_goal(const BlockConfig& config, const BlockState& state);

// `block` is an index into config.blocks. Throws PreconditionError when the
// block is already taken or the round is over.
BlockStep block_step(const BlockConfig& config, const BlockState& state, int block);

// Sum of numbers for a valid set (same colour, same shape, or pairwise
// distinct in both), otherwise a quarter of the sum. Throws PreconditionError
// unless the hand holds exactly `picks_per_player` blocks.
double block_payoff(const BlockConfig& config, const std::vector<Block>& hand);

class BlockGame final : public Rsg {
 public:
  explicit BlockGame(BlockConfig config);

  const BlockConfig& config() const { return config_; }

  std::string name() const override { return "blocks"; }
  StateId start_state() const override;
  bool is_goal(const StateId& state) const override;
  // The mover's actions are the remaining blocks in index order; the other
  // seat has the single action "wait".
  std::vector<std::string> actions(const StateId& state, Seat seat) const override;
  std::vector<Transition> transition(const StateId& state, JointAction action) const override;
  RewardPair rewards(const StateId& state, JointAction action) const override;
  std::string describe(const StateId& state) const override;

  static StateId encode(const BlockState& state);
  static BlockState decode(const StateId& id);
  // Block index picked by the mover's action `action` in `state`.
  int block_of(const BlockState& state, int action) const;

 private:
  BlockStep step(const StateId& state, JointAction action) const;

  BlockConfig config_;
};

enum class TieBreak { lowest_index, highest_index };

// Subgame-perfect outcome by backward induction over the pick tree. Each mover
// maximizes its own terminal payoff; indifference resolves by `tie`.
RewardPair block_spne(const BlockConfig& config, TieBreak tie = TieBreak::lowest_index);

struct BlockSummary {
  RewardPair spne_low;   // lowest-index tie-break
  RewardPair spne_high;  // highest-index tie-break
  double square_sum = 0.0;
  double triangle_sum = 0.0;

  double alternation_mean() const { return (square_sum + triangle_sum) / 2.0; }
};

BlockSummary summarize_blocks(const BlockConfig& config);

struct BlockTargets {
  double spne = 18.0;
  double square_sum = 40.0;
  double alternation_mean = 25.0;
};

// True when both tie-breaks give (spne, spne) and the square/triangle sums hit
// the targets exactly.
bool satisfies(const BlockSummary& summary, const BlockTargets& targets);

struct BlockSearchResult {
  std::vector<BlockConfig> solutions;
  long long candidates_checked = 0;
  bool exhausted = false;  // false when stopped at max_solutions
};

// Keeps the shapes and colours of `layout` and enumerates positive integer
// numbers: squares summing to the square target, triangles summing to
// 2*alternation_mean - square target, circles in [1, max_circle]. Stops after
// `max_solutions`.
BlockSearchResult search_block_numbers(const BlockConfig& layout, const BlockTargets& targets,
                                       int max_solutions, int max_circle = 3);

// Layout of three squares and three triangles with one block of each colour
// per shape, searched exhaustively the same way.
BlockConfig six_block_layout();

}  // namespace gabe::games
