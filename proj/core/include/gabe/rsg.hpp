#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gabe {

using Rng = std::mt19937_64;

// Seat of a player in a two-player game. Player 1 sits in `first`.
enum class Seat : std::uint8_t { first = 0, second = 1 };

constexpr int index_of(Seat seat) { return static_cast<int>(seat); }
constexpr Seat opponent(Seat seat) {
  return seat == Seat::first ? Seat::second : Seat::first;
}
constexpr Seat seat_from_index(int i) { return i == 0 ? Seat::first : Seat::second; }

// Action indices of both seats for one simultaneous move.
struct JointAction {
  int first = 0;
  int second = 0;

  constexpr int of(Seat seat) const { return seat == Seat::first ? first : second; }
  static constexpr JointAction from(Seat self, int own, int other) {
    return self == Seat::first ? JointAction{own, other} : JointAction{other, own};
  }
  friend constexpr bool operator==(const JointAction&, const JointAction&) = default;
};

struct RewardPair {
  double first = 0.0;
  double second = 0.0;

  constexpr double of(Seat seat) const { return seat == Seat::first ? first : second; }
  friend constexpr bool operator==(const RewardPair&, const RewardPair&) = default;
};

// Canonical encoding of a game state. Two states with identical game content
// encode to byte-identical identifiers.
class StateId {
 public:
  StateId() = default;
  explicit StateId(std::string bytes) : bytes_(std::move(bytes)) {}

  const std::string& bytes() const { return bytes_; }
  friend bool operator==(const StateId&, const StateId&) = default;
  friend auto operator<=>(const StateId&, const StateId&) = default;

 private:
  std::string bytes_;
};

struct StateIdHash {
  std::size_t operator()(const StateId& id) const noexcept {
    return std::hash<std::string>{}(id.bytes());
  }
};

struct Transition {
  StateId next;
  double probability = 0.0;
};

// Behavioral contract of an episodic two-player repeated stochastic game.
// Implementations are immutable after construction and safe to share.
class Rsg {
 public:
  virtual ~Rsg() = default;

  virtual std::string name() const = 0;
  virtual StateId start_state() const = 0;
  virtual bool is_goal(const StateId& state) const = 0;
  // Labels of the actions available to `seat`; action indices are positions.
  virtual std::vector<std::string> actions(const StateId& state, Seat seat) const = 0;
  virtual std::vector<Transition> transition(const StateId& state,
                                             JointAction action) const = 0;
  virtual RewardPair rewards(const StateId& state, JointAction action) const = 0;
  virtual std::string describe(const StateId& state) const { return state.bytes(); }
};

using StateIndex = std::int32_t;

struct Outcome {
  StateIndex next = 0;
  double probability = 0.0;
};

// The reachable part of an Rsg compiled into dense tables. Joint actions of a
// state are numbered lexicographically: index = a_first * n_second + a_second.
class TabularGame {
 public:
  std::string name() const { return name_; }
  std::size_t num_states() const { return states_.size(); }
  StateIndex start() const { return start_; }
  bool is_goal(StateIndex s) const { return states_[s].goal; }
  int num_actions(StateIndex s, Seat seat) const {
    return seat == Seat::first ? states_[s].n_first : states_[s].n_second;
  }
  int num_joint(StateIndex s) const { return states_[s].n_first * states_[s].n_second; }
  int joint_index(StateIndex s, JointAction a) const {
    return a.first * states_[s].n_second + a.second;
  }
  JointAction joint_action(StateIndex s, int joint) const {
    return {joint / states_[s].n_second, joint % states_[s].n_second};
  }
  std::span<const Outcome> outcomes(StateIndex s, int joint) const;
  RewardPair reward(StateIndex s, int joint) const {
    return joint_entries_[states_[s].joint_offset + joint].reward;
  }
  const StateId& id(StateIndex s) const { return states_[s].id; }
  std::optional<StateIndex> find(const StateId& id) const;
  const std::string& action_label(StateIndex s, Seat seat, int action) const;
  const std::string& description(StateIndex s) const { return states_[s].description; }

  // True when the state graph has no cycles; planners then solve exactly by
  // backward induction over `topological_order()` (start first).
  bool acyclic() const { return acyclic_; }
  std::span<const StateIndex> topological_order() const { return topo_; }

  // Default cap used by run_round: 10 moves per reachable state.
  int default_move_cap() const { return static_cast<int>(10 * num_states()); }

 private:
  friend TabularGame enumerate_states(const Rsg& game, std::size_t max_states);

  struct StateEntry {
    StateId id;
    std::string description;
    bool goal = false;
    int n_first = 0;
    int n_second = 0;
    std::size_t joint_offset = 0;
    std::size_t label_offset = 0;
  };
  struct JointEntry {
    RewardPair reward;
    std::size_t outcome_offset = 0;
    std::size_t outcome_count = 0;
  };

  std::string name_;
  std::vector<StateEntry> states_;
  std::vector<JointEntry> joint_entries_;
  std::vector<Outcome> outcomes_;
  std::vector<std::string> labels_;
  std::unordered_map<StateId, StateIndex, StateIdHash> index_;
  StateIndex start_ = 0;
  bool acyclic_ = false;
  std::vector<StateIndex> topo_;
};

inline constexpr std::size_t kDefaultStateBound = 2'000'000;

// Breadth-first enumeration of every state reachable from the start state.
// Validates the game contract on the way (distributions, action sets, finite
// rewards). Throws ResourceLimitError past `max_states`.
TabularGame enumerate_states(const Rsg& game, std::size_t max_states = kDefaultStateBound);

struct Move {
  StateIndex state = 0;
  JointAction action;
  RewardPair reward;
  StateIndex next = 0;
};

struct RoundRecord {
  std::vector<Move> moves;
  double total_first = 0.0;
  double total_second = 0.0;
  bool truncated = false;

  double total(Seat seat) const { return seat == Seat::first ? total_first : total_second; }
};

// A strategy for one seat of one game, driven move by move. Experts, the
// opponents zoo and the Gabe agent all implement this contract.
class Agent {
 public:
  virtual ~Agent() = default;

  virtual std::string name() const = 0;
  // Called before the first move of round `round` (1-based).
  virtual void begin_round(int round) { (void)round; }
  virtual int act(StateIndex state) = 0;
  // Every move of the round, including the opponent's action and both rewards.
  virtual void observe(const Move& move) { (void)move; }
  virtual void end_round(double own_total) { (void)own_total; }
};

// Plays one round from the start state. Both agents choose before the
// transition is sampled. The round ends at a goal state or after `move_cap`
// moves (truncated). Throws ContractViolation naming the agent when an agent
// returns an action outside its action set.
RoundRecord run_round(const TabularGame& game, Agent& first, Agent& second, Rng& rng,
                      int move_cap, int round = 1);

// Samples an index from a probability vector with one uniform draw.
int sample_index(std::span<const double> probabilities, Rng& rng);

}  // namespace gabe
