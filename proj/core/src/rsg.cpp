#include "gabe/rsg.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "gabe/errors.hpp"

namespace gabe {

std::span<const Outcome> TabularGame::outcomes(StateIndex s, int joint) const {
  const JointEntry& e = joint_entries_[states_[s].joint_offset + joint];
  return {outcomes_.data() + e.outcome_offset, e.outcome_count};
}

std::optional<StateIndex> TabularGame::find(const StateId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& TabularGame::action_label(StateIndex s, Seat seat, int action) const {
  const StateEntry& e = states_[s];
  const std::size_t pos = seat == Seat::first ? action : e.n_first + action;
  return labels_[e.label_offset + pos];
}

TabularGame enumerate_states(const Rsg& game, std::size_t max_states) {
  TabularGame t;
  t.name_ = game.name();

  auto intern = [&](const StateId& id, std::deque<StateIndex>& frontier) {
    auto [it, inserted] = t.index_.try_emplace(id, static_cast<StateIndex>(t.states_.size()));
    if (inserted) {
      if (t.states_.size() >= max_states) {
        throw ResourceLimitError("game '" + t.name_ + "' has more than " +
                                 std::to_string(max_states) + " reachable states");
      }
      t.states_.push_back({.id = id});
      frontier.push_back(it->second);
    }
    return it->second;
  };

  std::deque<StateIndex> frontier;
  const StateId start = game.start_state();
  if (game.is_goal(start)) throw ContractViolation("start state of '" + t.name_ + "' is a goal");
  t.start_ = intern(start, frontier);

  while (!frontier.empty()) {
    const StateIndex s = frontier.front();
    frontier.pop_front();
    const StateId id = t.states_[s].id;
    t.states_[s].description = game.describe(id);
    t.states_[s].label_offset = t.labels_.size();
    t.states_[s].joint_offset = t.joint_entries_.size();
    if (game.is_goal(id)) {
      t.states_[s].goal = true;
      continue;
    }
    auto first = game.actions(id, Seat::first);
    auto second = game.actions(id, Seat::second);
    if (first.empty() || second.empty()) {
      throw ContractViolation("empty action set in non-goal state " + game.describe(id));
    }
    t.states_[s].n_first = static_cast<int>(first.size());
    t.states_[s].n_second = static_cast<int>(second.size());
    for (auto& l : first) t.labels_.push_back(std::move(l));
    for (auto& l : second) t.labels_.push_back(std::move(l));

    for (int a = 0; a < t.states_[s].n_first; ++a) {
      for (int b = 0; b < t.states_[s].n_second; ++b) {
        const JointAction ja{a, b};
        const RewardPair r = game.rewards(id, ja);
        if (!std::isfinite(r.first) || !std::isfinite(r.second)) {
          throw ContractViolation("non-finite reward in state " + game.describe(id));
        }
        TabularGame::JointEntry entry{.reward = r, .outcome_offset = t.outcomes_.size()};
        double total = 0.0;
        for (const Transition& tr : game.transition(id, ja)) {
          if (!(tr.probability >= 0.0)) {
            throw ContractViolation("negative transition probability in state " +
                                    game.describe(id));
          }
          total += tr.probability;
          if (tr.probability == 0.0) continue;
          const StateIndex next = intern(tr.next, frontier);
          t.outcomes_.push_back({next, tr.probability});
          ++entry.outcome_count;
        }
        if (std::abs(total - 1.0) > 1e-9) {
          throw ContractViolation("transition distribution sums to " + std::to_string(total) +
                                  " in state " + game.describe(id));
        }
        t.joint_entries_.push_back(entry);
      }
    }
  }

  // Kahn's algorithm; leftover states mean a cycle.
  const std::size_t n = t.states_.size();
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<StateIndex>> succ(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (t.states_[s].goal) continue;
    const int joints = t.num_joint(static_cast<StateIndex>(s));
    for (int j = 0; j < joints; ++j) {
      for (const Outcome& o : t.outcomes(static_cast<StateIndex>(s), j)) {
        succ[s].push_back(o.next);
      }
    }
    std::sort(succ[s].begin(), succ[s].end());
    succ[s].erase(std::unique(succ[s].begin(), succ[s].end()), succ[s].end());
    for (StateIndex x : succ[s]) ++indegree[x];
  }
  std::deque<StateIndex> ready;
  for (std::size_t s = 0; s < n; ++s) {
    if (indegree[s] == 0) ready.push_back(static_cast<StateIndex>(s));
  }
  while (!ready.empty()) {
    const StateIndex s = ready.front();
    ready.pop_front();
    t.topo_.push_back(s);
    for (StateIndex x : succ[s]) {
      if (--indegree[x] == 0) ready.push_back(x);
    }
  }
  t.acyclic_ = t.topo_.size() == n;
  if (!t.acyclic_) t.topo_.clear();
  return t;
}

int sample_index(std::span<const double> probabilities, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double acc = 0.0;
  int last_positive = 0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    if (probabilities[k] <= 0.0) continue;
    acc += probabilities[k];
    last_positive = static_cast<int>(k);
    if (u < acc) return static_cast<int>(k);
  }
  return last_positive;
}

namespace {

int checked_action(Agent& agent, const TabularGame& game, StateIndex s, Seat seat) {
  const int a = agent.act(s);
  const int n = game.num_actions(s, seat);
  if (a < 0 || a >= n) {
    throw ContractViolation("agent '" + agent.name() + "' returned action " +
                            std::to_string(a) + " outside its action set of size " +
                            std::to_string(n) + " in state " + game.description(s));
  }
  return a;
}

}  // namespace

RoundRecord run_round(const TabularGame& game, Agent& first, Agent& second, Rng& rng,
                      int move_cap, int round) {
  if (move_cap < 1) throw ContractViolation("move_cap must be >= 1");
  first.begin_round(round);
  second.begin_round(round);

  RoundRecord record;
  StateIndex s = game.start();
  while (!game.is_goal(s)) {
    if (static_cast<int>(record.moves.size()) >= move_cap) {
      record.truncated = true;
      break;
    }
    const JointAction ja{checked_action(first, game, s, Seat::first),
                         checked_action(second, game, s, Seat::second)};
    const int joint = game.joint_index(s, ja);
    const auto outs = game.outcomes(s, joint);
    StateIndex next = outs.front().next;
    if (outs.size() > 1) {
      std::vector<double> probs;
      probs.reserve(outs.size());
      for (const Outcome& o : outs) probs.push_back(o.probability);
      next = outs[sample_index(probs, rng)].next;
    }
    const Move move{s, ja, game.reward(s, joint), next};
    record.total_first += move.reward.first;
    record.total_second += move.reward.second;
    record.moves.push_back(move);
    first.observe(move);
    second.observe(move);
    s = next;
  }
  first.end_round(record.total_first);
  second.end_round(record.total_second);
  return record;
}

}  // namespace gabe
