#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "gabe/explicit_game.hpp"
#include "gabe/planning.hpp"
#include "gabe/rsg.hpp"

namespace gabe::testing {

// Prisoner's dilemma at "pd"; mutual cooperation leads to a battle of the
// sexes at "coord", anything else to a second dilemma at "pd2". 64
// deterministic joint policies.
std::shared_ptr<ExplicitRsg> dilemma_fixture();

// One-shot matching pennies with payoffs +1 / -1.
std::shared_ptr<ExplicitRsg> matching_pennies();

// A zero-reward opening move, then matching pennies.
std::shared_ptr<ExplicitRsg> embedded_pennies();

// One-shot prisoner's dilemma; defecting (action 1) strictly dominates.
std::shared_ptr<ExplicitRsg> one_shot_dilemma();

// A coin flip after the opening move sends play to one of two stage games.
std::shared_ptr<ExplicitRsg> chance_fixture();

// Player 1 may "wait" (action 0, reward (1,1), loops back with probability
// 0.5) or "go" (action 1, reward (0,3)) to the goal.
std::shared_ptr<ExplicitRsg> loop_fixture();

TabularGame compile(const Rsg& game);

// Breadth-first search over the Rsg interface only.
std::set<std::string> bfs_state_ids(const Rsg& game);

// Start-state values of a deterministic joint policy (joint index per state),
// by direct recursion over the tables. Acyclic games only.
RewardPair joint_policy_value(const TabularGame& game, const std::vector<int>& joint_policy);

// Calls `visit` with every deterministic joint policy of an acyclic game.
void for_each_joint_policy(const TabularGame& game,
                           const std::function<void(const std::vector<int>&)>& visit);

// Expected start-state return of `seat` when it plays the deterministic
// `own` actions and the other seat plays `other` (mixed). Acyclic games only.
double own_policy_value(const TabularGame& game, Seat seat, const std::vector<int>& own,
                        const MixedPolicy& other);

// Best return of `seat` against the stationary `other` by enumerating every
// deterministic own policy. Acyclic games only.
double brute_force_best_response(const TabularGame& game, Seat seat, const MixedPolicy& other);

// Value of the zero-sum matrix game by searching row mixtures on a grid of
// step `step` (2 or 3 rows only; more rows use 2-row sub-mixtures).
double grid_matrix_value(const std::vector<std::vector<double>>& m, double step);

// Row-player payoff of mixture `p` against the column best response.
double guaranteed(const std::vector<std::vector<double>>& m, const std::vector<double>& p);

}  // namespace gabe::testing
