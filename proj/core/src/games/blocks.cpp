#include "gabe/games/blocks.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>

#include "gabe/errors.hpp"

namespace gabe::games {

namespace {

constexpr int kMaxBlocks = 16;
constexpr int kMaxSpneBlocks = 10;

bool all_same(const std::vector<int>& v) {
  for (int x : v) {
    if (x != v.front()) return false;
  }
  return true;
}

bool all_distinct(const std::vector<int>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      if (v[i] == v[j]) return false;
    }
  }
  return true;
}

std::vector<Block> hand_of(const BlockConfig& config, std::uint32_t mask) {
  std::vector<Block> hand;
  for (std::size_t k = 0; k < config.blocks.size(); ++k) {
    if (mask >> k & 1U) hand.push_back(config.blocks[k]);
  }
  return hand;
}

// Calls f(parts) for every composition of `total` into `n` positive parts.
template <class F>
bool for_each_composition(int total, int n, std::vector<int>& parts, F&& f) {
  if (n == 1) {
    parts.push_back(total);
    const bool go_on = f(parts);
    parts.pop_back();
    return go_on;
  }
  for (int first = 1; first <= total - (n - 1); ++first) {
    parts.push_back(first);
    const bool go_on = for_each_composition(total - first, n - 1, parts, f);
    parts.pop_back();
    if (!go_on) return false;
  }
  return true;
}

}  // namespace

std::string to_string(Shape shape) {
  switch (shape) {
    case Shape::square: return "square";
    case Shape::triangle: return "triangle";
    case Shape::circle: return "circle";
  }
  return "?";
}

std::string to_string(Color color) {
  switch (color) {
    case Color::red: return "red";
    case Color::blue: return "blue";
    case Color::yellow: return "yellow";
  }
  return "?";
}

Shape parse_shape(const std::string& text) {
  if (text == "square") return Shape::square;
  if (text == "triangle") return Shape::triangle;
  if (text == "circle") return Shape::circle;
  throw ConfigError("unknown shape '" + text + "' (expected square, triangle or circle)");
}

Color parse_color(const std::string& text) {
  if (text == "red") return Color::red;
  if (text == "blue") return Color::blue;
  if (text == "yellow") return Color::yellow;
  throw ConfigError("unknown color '" + text + "' (expected red, blue or yellow)");
}

BlockConfig BlockConfig::defaults() {
  using enum Shape;
  using enum Color;
  BlockConfig c;
  c.blocks = {
      {square, blue, 7},   {square, blue, 16},   {square, yellow, 17},
      {triangle, red, 1},  {triangle, yellow, 1}, {triangle, red, 8},
      {circle, yellow, 3}, {circle, red, 1},
  };
  return c;
}

void BlockConfig::validate() const {
  if (picks_per_player < 1) throw ConfigError("picks_per_player must be >= 1");
  if (static_cast<int>(blocks.size()) < 2 * picks_per_player) {
    throw ConfigError("blocks must hold at least 2 * picks_per_player entries");
  }
  if (static_cast<int>(blocks.size()) > kMaxBlocks) {
    throw ConfigError("blocks may hold at most " + std::to_string(kMaxBlocks) + " entries");
  }
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (!(blocks[k].number > 0.0) || !std::isfinite(blocks[k].number)) {
      throw ConfigError("blocks[" + std::to_string(k) + "].number must be > 0");
    }
  }
}

Seat block_mover(const BlockConfig& config, const BlockState& state) {
  const int own = std::popcount(config.first_mover == Seat::first ? state.hand_p1 : state.hand_p2);
  const int other =
      std::popcount(config.first_mover == Seat::first ? state.hand_p2 : state.hand_p1);
  return own == other ? config.first_mover : opponent(config.first_mover);
}

bool block_is_goal(const BlockConfig& config, const BlockState& state) {
  return std::popcount(state.hand_p1) >= config.picks_per_player &&
         std::popcount(state.hand_p2) >= config.picks_per_player;
}

double block_payoff(const BlockConfig& config, const std::vector<Block>& hand) {
  if (static_cast<int>(hand.size()) != config.picks_per_player) {
    throw PreconditionError("hand holds " + std::to_string(hand.size()) + " blocks, expected " +
                            std::to_string(config.picks_per_player));
  }
  std::vector<int> shapes, colors;
  double sum = 0.0;
  for (const Block& b : hand) {
    shapes.push_back(static_cast<int>(b.shape));
    colors.push_back(static_cast<int>(b.color));
    sum += b.number;
  }
  const bool valid =
      all_same(colors) || all_same(shapes) || (all_distinct(colors) && all_distinct(shapes));
  return valid ? sum : sum / 4.0;
}

BlockStep block_step(const BlockConfig& config, const BlockState& state, int block) {
  if (block_is_goal(config, state)) throw PreconditionError("block round is already over");
  if (block < 0 || block >= static_cast<int>(config.blocks.size())) {
    throw PreconditionError("block index " + std::to_string(block) + " out of range");
  }
  const std::uint32_t bit = 1U << block;
  if ((state.hand_p1 | state.hand_p2) & bit) {
    throw PreconditionError("block " + std::to_string(block) + " is already taken");
  }
  BlockStep out;
  out.next = state;
  if (block_mover(config, state) == Seat::first) {
    out.next.hand_p1 |= bit;
  } else {
    out.next.hand_p2 |= bit;
  }
  if (block_is_goal(config, out.next)) {
    out.rewards.first = block_payoff(config, hand_of(config, out.next.hand_p1));
    out.rewards.second = block_payoff(config, hand_of(config, out.next.hand_p2));
  }
  return out;
}

BlockGame::BlockGame(BlockConfig config) : config_(std::move(config)) { config_.validate(); }

StateId BlockGame::encode(const BlockState& s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%x;%x", s.hand_p1, s.hand_p2);
  return StateId(buf);
}

BlockState BlockGame::decode(const StateId& id) {
  BlockState s;
  std::sscanf(id.bytes().c_str(), "%x;%x", &s.hand_p1, &s.hand_p2);
  return s;
}

int BlockGame::block_of(const BlockState& state, int action) const {
  const std::uint32_t taken = state.hand_p1 | state.hand_p2;
  for (int k = 0; k < static_cast<int>(config_.blocks.size()); ++k) {
    if (taken >> k & 1U) continue;
    if (action-- == 0) return k;
  }
  throw PreconditionError("pick index out of range");
}

StateId BlockGame::start_state() const { return encode({}); }

bool BlockGame::is_goal(const StateId& state) const {
  return block_is_goal(config_, decode(state));
}

std::vector<std::string> BlockGame::actions(const StateId& state, Seat seat) const {
  const BlockState s = decode(state);
  if (block_mover(config_, s) != seat) return {"wait"};
  std::vector<std::string> labels;
  const std::uint32_t taken = s.hand_p1 | s.hand_p2;
  for (std::size_t k = 0; k < config_.blocks.size(); ++k) {
    if (taken >> k & 1U) continue;
    const Block& b = config_.blocks[k];
    char num[32];
    std::snprintf(num, sizeof num, "%g", b.number);
    labels.push_back(to_string(b.color) + "-" + to_string(b.shape) + "-" + num);
  }
  return labels;
}

BlockStep BlockGame::step(const StateId& state, JointAction action) const {
  const BlockState s = decode(state);
  return block_step(config_, s, block_of(s, action.of(block_mover(config_, s))));
}

std::vector<Transition> BlockGame::transition(const StateId& state, JointAction action) const {
  return {Transition{encode(step(state, action).next), 1.0}};
}

RewardPair BlockGame::rewards(const StateId& state, JointAction action) const {
  return step(state, action).rewards;
}

std::string BlockGame::describe(const StateId& state) const {
  const BlockState s = decode(state);
  auto list = [&](std::uint32_t mask) {
    std::string out;
    for (std::size_t k = 0; k < config_.blocks.size(); ++k) {
      if (mask >> k & 1U) out += (out.empty() ? "" : ",") + std::to_string(k);
    }
    return "{" + out + "}";
  };
  return "p1=" + list(s.hand_p1) + " p2=" + list(s.hand_p2);
}

namespace {

// Reusable memo for the pick-tree recursion; entries are valid when their
// stamp matches the current solve.
// Pick tree of one (block count, picks, first mover) shape, children listed
// before parents so a single forward pass solves it.
struct SpneTree {
  struct Node {
    std::uint32_t hand_p1 = 0;
    std::uint32_t hand_p2 = 0;
    bool goal = false;
    Seat mover = Seat::first;
    std::uint32_t child_begin = 0;
    std::uint32_t child_end = 0;
  };
  int n = -1;
  int picks = 0;
  Seat first_mover = Seat::first;
  std::vector<Node> nodes;
  std::vector<std::uint32_t> children;  // in block-index order per node

  bool matches(const BlockConfig& c) const {
    return n == static_cast<int>(c.blocks.size()) && picks == c.picks_per_player &&
           first_mover == c.first_mover;
  }

  void build(const BlockConfig& c) {
    n = static_cast<int>(c.blocks.size());
    picks = c.picks_per_player;
    first_mover = c.first_mover;
    nodes.clear();
    children.clear();
    std::vector<std::int32_t> id(std::size_t{1} << (2 * n), -1);
    // Iterative post-order DFS.
    struct Frame {
      BlockState s;
      int next_block;
      std::vector<std::uint32_t> kids;
    };
    std::vector<Frame> stack;
    stack.push_back({BlockState{}, 0, {}});
    while (!stack.empty()) {
      Frame& f = stack.back();
      const bool goal = block_is_goal(c, f.s);
      const std::uint32_t taken = f.s.hand_p1 | f.s.hand_p2;
      bool descended = false;
      while (!goal && f.next_block < n) {
        const int k = f.next_block++;
        if (taken >> k & 1U) continue;
        BlockState next = f.s;
        (block_mover(c, f.s) == Seat::first ? next.hand_p1 : next.hand_p2) |= 1U << k;
        const std::size_t key = next.hand_p1 | (std::size_t{next.hand_p2} << n);
        if (id[key] >= 0) {
          f.kids.push_back(static_cast<std::uint32_t>(id[key]));
          continue;
        }
        stack.push_back({next, 0, {}});
        descended = true;
        break;
      }
      if (descended) continue;
      Node node;
      node.hand_p1 = f.s.hand_p1;
      node.hand_p2 = f.s.hand_p2;
      node.goal = goal;
      node.mover = goal ? Seat::first : block_mover(c, f.s);
      node.child_begin = static_cast<std::uint32_t>(children.size());
      children.insert(children.end(), f.kids.begin(), f.kids.end());
      node.child_end = static_cast<std::uint32_t>(children.size());
      const auto index = static_cast<std::uint32_t>(nodes.size());
      nodes.push_back(node);
      id[f.s.hand_p1 | (std::size_t{f.s.hand_p2} << n)] = static_cast<std::int32_t>(index);
      stack.pop_back();
      if (!stack.empty()) stack.back().kids.push_back(index);
    }
  }
};

struct SpneWorkspace {
  SpneTree tree;
  std::vector<RewardPair> value;
  std::vector<double> hand_payoff;
};

RewardPair solve_spne(const BlockConfig& config, TieBreak tie, SpneWorkspace& ws) {
  const int n = static_cast<int>(config.blocks.size());
  if (n > kMaxSpneBlocks) {
    throw ResourceLimitError("block_spne supports at most " + std::to_string(kMaxSpneBlocks) +
                             " blocks");
  }
  if (!ws.tree.matches(config)) ws.tree.build(config);
  ws.hand_payoff.assign(std::size_t{1} << n, 0.0);
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    if (std::popcount(mask) == config.picks_per_player) {
      ws.hand_payoff[mask] = block_payoff(config, hand_of(config, mask));
    }
  }
  const auto& nodes = ws.tree.nodes;
  ws.value.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& node = nodes[i];
    if (node.goal) {
      ws.value[i] = {ws.hand_payoff[node.hand_p1], ws.hand_payoff[node.hand_p2]};
      continue;
    }
    RewardPair best = ws.value[ws.tree.children[node.child_begin]];
    for (std::uint32_t c = node.child_begin + 1; c < node.child_end; ++c) {
      const RewardPair& child = ws.value[ws.tree.children[c]];
      const double v = child.of(node.mover);
      const double incumbent = best.of(node.mover);
      const bool better =
          tie == TieBreak::lowest_index ? v > incumbent + 1e-9 : v >= incumbent - 1e-9;
      if (better) best = child;
    }
    ws.value[i] = best;
  }
  return ws.value.back();
}

BlockSummary summarize(const BlockConfig& config, SpneWorkspace& ws) {
  BlockSummary s;
  s.spne_low = solve_spne(config, TieBreak::lowest_index, ws);
  s.spne_high = solve_spne(config, TieBreak::highest_index, ws);
  for (const Block& b : config.blocks) {
    if (b.shape == Shape::square) s.square_sum += b.number;
    if (b.shape == Shape::triangle) s.triangle_sum += b.number;
  }
  return s;
}

}  // namespace

RewardPair block_spne(const BlockConfig& config, TieBreak tie) {
  config.validate();
  SpneWorkspace ws;
  return solve_spne(config, tie, ws);
}

BlockSummary summarize_blocks(const BlockConfig& config) {
  config.validate();
  SpneWorkspace ws;
  return summarize(config, ws);
}

bool satisfies(const BlockSummary& s, const BlockTargets& t) {
  const RewardPair want{t.spne, t.spne};
  return s.spne_low == want && s.spne_high == want && s.square_sum == t.square_sum &&
         s.alternation_mean() == t.alternation_mean;
}

BlockSearchResult search_block_numbers(const BlockConfig& layout, const BlockTargets& targets,
                                       int max_solutions, int max_circle) {
  std::vector<int> squares, triangles, circles;
  for (std::size_t k = 0; k < layout.blocks.size(); ++k) {
    switch (layout.blocks[k].shape) {
      case Shape::square: squares.push_back(static_cast<int>(k)); break;
      case Shape::triangle: triangles.push_back(static_cast<int>(k)); break;
      case Shape::circle: circles.push_back(static_cast<int>(k)); break;
    }
  }
  const int square_total = static_cast<int>(std::lround(targets.square_sum));
  const int triangle_total =
      static_cast<int>(std::lround(2.0 * targets.alternation_mean - targets.square_sum));
  if (squares.empty() || triangles.empty() || triangle_total < static_cast<int>(triangles.size())) {
    throw ConfigError("block layout cannot meet the square and triangle targets");
  }

  layout.validate();
  BlockSearchResult result;
  BlockConfig candidate = layout;
  SpneWorkspace ws;
  std::vector<int> sq_parts, tr_parts;
  const int circle_count = static_cast<int>(circles.size());
  long long circle_combos = 1;
  for (int k = 0; k < circle_count; ++k) circle_combos *= max_circle;

  result.exhausted = for_each_composition(square_total, static_cast<int>(squares.size()),
                                          sq_parts, [&](const std::vector<int>& sq) {
    for (std::size_t k = 0; k < sq.size(); ++k) candidate.blocks[squares[k]].number = sq[k];
    return for_each_composition(triangle_total, static_cast<int>(triangles.size()), tr_parts,
                                [&](const std::vector<int>& tr) {
      for (std::size_t k = 0; k < tr.size(); ++k) candidate.blocks[triangles[k]].number = tr[k];
      for (long long code = 0; code < circle_combos; ++code) {
        long long rest = code;
        for (int k = 0; k < circle_count; ++k) {
          candidate.blocks[circles[k]].number = static_cast<double>(1 + rest % max_circle);
          rest /= max_circle;
        }
        ++result.candidates_checked;
        // Cheap rejection on one tie-break before the full check.
        const RewardPair low = solve_spne(candidate, TieBreak::lowest_index, ws);
        if (low.first != targets.spne || low.second != targets.spne) continue;
        if (satisfies(summarize(candidate, ws), targets)) {
          result.solutions.push_back(candidate);
          if (static_cast<int>(result.solutions.size()) >= max_solutions) return false;
        }
      }
      return true;
    });
  });
  return result;
}

BlockConfig six_block_layout() {
  using enum Shape;
  using enum Color;
  BlockConfig c;
  c.blocks = {
      {square, red, 1},   {square, blue, 1},   {square, yellow, 1},
      {triangle, red, 1}, {triangle, blue, 1}, {triangle, yellow, 1},
  };
  return c;
}

}  // namespace gabe::games
