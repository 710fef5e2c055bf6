#pragma once

#include <vector>

#include "gabe/planning.hpp"
#include "gabe/rsg.hpp"

namespace gabe::detail {

// A single-agent MDP over the states of a TabularGame. Goal states have no
// choices.
struct FlatMdp {
  struct Choice {
    double reward = 0.0;
    std::size_t out_begin = 0;
    std::size_t out_end = 0;
  };
  std::vector<std::size_t> first_choice;  // num_states + 1 offsets
  std::vector<Choice> choices;
  std::vector<Outcome> outs;

  void begin_state() { first_choice.push_back(choices.size()); }
  void add_choice(double reward) { choices.push_back({reward, outs.size(), outs.size()}); }
  void add_outcome(StateIndex next, double p) {
    outs.push_back({next, p});
    choices.back().out_end = outs.size();
  }
  void finish() { first_choice.push_back(choices.size()); }
};

struct MdpSolution {
  std::vector<int> choice;  // -1 at goals
  std::vector<double> value;
};

// Maximizes expected total reward. Exact backward induction on acyclic games;
// Gauss-Seidel value iteration otherwise, with optimal choices restricted to
// those that make progress toward a goal. Ties go to the lowest choice index.
MdpSolution solve_flat(const TabularGame& game, const FlatMdp& mdp, const SolverOptions& options,
                       const char* what);

}  // namespace gabe::detail
