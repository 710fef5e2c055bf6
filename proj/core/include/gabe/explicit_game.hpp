#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gabe/rsg.hpp"

namespace gabe {

// An Rsg written out as explicit tables. Used for small hand-built games
// (matrix games, fixtures, regression cases). States are named; a state with
// no outcomes registered and marked as goal terminates the round.
class ExplicitRsg final : public Rsg {
 public:
  explicit ExplicitRsg(std::string name) : name_(std::move(name)) {}

  // Declares a non-goal state with the given action counts per seat.
  ExplicitRsg& add_state(const std::string& state, int n_first, int n_second);
  ExplicitRsg& add_goal(const std::string& state);
  ExplicitRsg& set_start(const std::string& state);
  // Rewards and successor distribution of one joint action.
  ExplicitRsg& set(const std::string& state, JointAction action, RewardPair reward,
                   std::vector<std::pair<std::string, double>> successors);

  std::string name() const override { return name_; }
  StateId start_state() const override;
  bool is_goal(const StateId& state) const override;
  std::vector<std::string> actions(const StateId& state, Seat seat) const override;
  std::vector<Transition> transition(const StateId& state, JointAction action) const override;
  RewardPair rewards(const StateId& state, JointAction action) const override;

 private:
  struct Entry {
    RewardPair reward;
    std::vector<std::pair<std::string, double>> successors;
  };
  struct Node {
    bool goal = false;
    int n_first = 0;
    int n_second = 0;
    std::map<std::pair<int, int>, Entry> entries;
  };

  const Node& node(const StateId& state) const;
  const Entry& entry(const StateId& state, JointAction action) const;

  std::string name_;
  std::string start_;
  std::map<std::string, Node> nodes_;
};

}  // namespace gabe
