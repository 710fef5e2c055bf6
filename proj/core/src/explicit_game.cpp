#include "gabe/explicit_game.hpp"

#include "gabe/errors.hpp"

namespace gabe {

ExplicitRsg& ExplicitRsg::add_state(const std::string& state, int n_first, int n_second) {
  if (n_first < 1 || n_second < 1) {
    throw ContractViolation("state '" + state + "' needs at least one action per seat");
  }
  Node& n = nodes_[state];
  n.goal = false;
  n.n_first = n_first;
  n.n_second = n_second;
  if (start_.empty()) start_ = state;
  return *this;
}

ExplicitRsg& ExplicitRsg::add_goal(const std::string& state) {
  nodes_[state] = Node{.goal = true};
  return *this;
}

ExplicitRsg& ExplicitRsg::set_start(const std::string& state) {
  start_ = state;
  return *this;
}

ExplicitRsg& ExplicitRsg::set(const std::string& state, JointAction action, RewardPair reward,
                              std::vector<std::pair<std::string, double>> successors) {
  auto it = nodes_.find(state);
  if (it == nodes_.end() || it->second.goal) {
    throw ContractViolation("set() on unknown or goal state '" + state + "'");
  }
  if (action.first < 0 || action.first >= it->second.n_first || action.second < 0 ||
      action.second >= it->second.n_second) {
    throw ContractViolation("joint action out of range in state '" + state + "'");
  }
  it->second.entries[{action.first, action.second}] = Entry{reward, std::move(successors)};
  return *this;
}

const ExplicitRsg::Node& ExplicitRsg::node(const StateId& state) const {
  auto it = nodes_.find(state.bytes());
  if (it == nodes_.end()) throw ContractViolation("unknown state '" + state.bytes() + "'");
  return it->second;
}

const ExplicitRsg::Entry& ExplicitRsg::entry(const StateId& state, JointAction action) const {
  const Node& n = node(state);
  auto it = n.entries.find({action.first, action.second});
  if (it == n.entries.end()) {
    throw ContractViolation("no outcome registered for (" + std::to_string(action.first) + "," +
                            std::to_string(action.second) + ") in state '" + state.bytes() +
                            "'");
  }
  return it->second;
}

StateId ExplicitRsg::start_state() const { return StateId(start_); }

bool ExplicitRsg::is_goal(const StateId& state) const { return node(state).goal; }

std::vector<std::string> ExplicitRsg::actions(const StateId& state, Seat seat) const {
  const Node& n = node(state);
  const int count = seat == Seat::first ? n.n_first : n.n_second;
  std::vector<std::string> labels;
  for (int a = 0; a < count; ++a) labels.push_back("a" + std::to_string(a));
  return labels;
}

std::vector<Transition> ExplicitRsg::transition(const StateId& state, JointAction action) const {
  std::vector<Transition> out;
  for (const auto& [next, p] : entry(state, action).successors) {
    out.push_back(Transition{StateId(next), p});
  }
  return out;
}

RewardPair ExplicitRsg::rewards(const StateId& state, JointAction action) const {
  return entry(state, action).reward;
}

}  // namespace gabe
