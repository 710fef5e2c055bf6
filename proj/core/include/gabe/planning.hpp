#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gabe/rsg.hpp"

namespace gabe {

// Convergence controls for the iterative solvers. DAG games ignore them and
// are solved exactly by backward induction.
struct SolverOptions {
  double tolerance = 1e-9;
  long max_iterations = 100'000;
};

// Per-state mixed strategy of one seat; empty at goal states.
using MixedPolicy = std::vector<std::vector<double>>;

struct MatrixGameSolution {
  double value = 0.0;
  std::vector<double> row;     // optimal strategy of the row maximizer
  std::vector<double> column;  // optimal strategy of the column minimizer
};

// Minimax value of the zero-sum matrix game `m` (row player maximizes) by the
// simplex method with Bland's rule. `m` is row-major, rows x cols.
MatrixGameSolution matrix_game_solve(const std::vector<std::vector<double>>& m);

// Joint policy maximizing sigma = omega * r_self + (1 - omega) * r_other, with
// the per-seat returns it induces. Ties between joint actions go to the lowest
// joint index. In cyclic games the lowest-index rule applies among optimal
// joint actions that make progress toward a goal.
struct JointPlan {
  double omega = 0.0;
  Seat self = Seat::first;
  std::vector<int> policy;  // joint index per state, -1 at goals
  std::vector<double> v_first;
  std::vector<double> v_second;

  double value(Seat seat, StateIndex s) const {
    return seat == Seat::first ? v_first[s] : v_second[s];
  }
  RewardPair value_at(StateIndex s) const { return {v_first[s], v_second[s]}; }
};

// Throws DivergenceError when value iteration does not converge.
JointPlan solve_joint_mdp(const TabularGame& game, double omega, Seat self = Seat::first,
                          const SolverOptions& options = {});

struct BestResponse {
  std::vector<int> policy;    // own action per state, -1 at goals
  std::vector<double> value;  // own expected return per state
};

// Optimal single-agent policy for `self` when the other seat plays `opponent`
// (stationary, per-state mixed). Ties go to the lowest own action index.
BestResponse best_response(const TabularGame& game, Seat self, const MixedPolicy& opponent,
                           const SolverOptions& options = {});

// Expected start-to-goal returns when both seats follow stationary mixed
// policies. Throws DivergenceError when play does not terminate in
// expectation within the iteration cap.
std::vector<RewardPair> evaluate_profile(const TabularGame& game, const MixedPolicy& first,
                                         const MixedPolicy& second,
                                         const SolverOptions& options = {});

MixedPolicy uniform_policy(const TabularGame& game, Seat seat);
MixedPolicy deterministic_policy(const TabularGame& game, Seat seat,
                                 const std::vector<int>& actions);

// Zero-sum view of the game on `protect`'s reward.
struct SecurityProfile {
  Seat protect = Seat::first;
  MixedPolicy maximin;  // protected seat
  MixedPolicy attack;   // adversary, minimizing the protected seat's return
  std::vector<double> value;
  double security_value = 0.0;
};

// Shapley value iteration (exact backward induction on DAG games) with each
// stage solved by matrix_game_solve. Converges to 1e-6 on cyclic games.
SecurityProfile solve_zero_sum(const TabularGame& game, Seat protect,
                               const SolverOptions& options = {1e-6, 100'000});

// A pure joint plan, or two plans alternated round by round.
struct TargetSolution {
  std::vector<std::shared_ptr<const JointPlan>> plans;
  // Weights (on the first seat) that produced each plan. A pure target lists
  // every grid weight that merged into it.
  std::vector<std::vector<double>> omegas;
  RewardPair payoff;  // start-state values, averaged over the cycle

  bool alternating() const { return plans.size() == 2; }
  // Odd rounds (1-based) follow plans[0], even rounds plans[1].
  const JointPlan& plan_for_round(int round) const {
    return *plans[alternating() && round % 2 == 0 ? 1 : 0];
  }
  // Lowest weight on `seat`'s own reward among the producing weights.
  double own_omega(Seat seat) const;
  std::string label() const;
};

std::vector<double> default_omega_grid();

// Pure solutions for every grid weight (merged by equal payoff vector), then
// one alternating target for every pair of distinct pure solutions. The plans
// of an alternating target are ordered by the first seat's payoff, ascending.
std::vector<TargetSolution> enumerate_targets(const TabularGame& game,
                                              const std::vector<double>& omega_grid,
                                              const SolverOptions& options = {});

// Egalitarian, then the best for `self` with the other at or above its
// security level, then the best for the other with `self` at or above its
// security level, then greedily the targets farthest from those chosen.
// Ties: lower own weight, then pure before alternating. `security` holds the
// security values by seat.
std::vector<TargetSolution> select_targets(const std::vector<TargetSolution>& candidates,
                                           RewardPair security, Seat self, int k = 5);

// Index of the candidate best for `self` with the other at or above its
// security level (slot 2 above); nullopt when none qualifies.
std::optional<std::size_t> bully_index(const std::vector<TargetSolution>& candidates,
                                       RewardPair security, Seat self);

// Index of the candidate maximizing the smaller payoff (slot 1 above).
std::size_t egalitarian_index(const std::vector<TargetSolution>& candidates, Seat self);

}  // namespace gabe
