#include <algorithm>
#include <cmath>

#include "gabe/errors.hpp"
#include "gabe/planning.hpp"

namespace gabe {

namespace {

// Stage game at `s` with the protected seat as row player.
std::vector<std::vector<double>> stage_matrix(const TabularGame& game, StateIndex s, Seat protect,
                                              const std::vector<double>& value) {
  const Seat adversary = opponent(protect);
  const int rows = game.num_actions(s, protect);
  const int cols = game.num_actions(s, adversary);
  std::vector<std::vector<double>> m(rows, std::vector<double>(cols, 0.0));
  for (int a = 0; a < rows; ++a) {
    for (int b = 0; b < cols; ++b) {
      const int j = game.joint_index(s, JointAction::from(protect, a, b));
      double q = game.reward(s, j).of(protect);
      for (const Outcome& o : game.outcomes(s, j)) q += o.probability * value[o.next];
      m[a][b] = q;
    }
  }
  return m;
}

}  // namespace

SecurityProfile solve_zero_sum(const TabularGame& game, Seat protect, const SolverOptions& options) {
  const std::size_t n = game.num_states();
  SecurityProfile out;
  out.protect = protect;
  out.maximin.assign(n, {});
  out.attack.assign(n, {});
  out.value.assign(n, 0.0);

  auto solve_state = [&](StateIndex s) {
    MatrixGameSolution sol = matrix_game_solve(stage_matrix(game, s, protect, out.value));
    out.maximin[s] = std::move(sol.row);
    out.attack[s] = std::move(sol.column);
    return sol.value;
  };

  if (game.acyclic()) {
    const auto order = game.topological_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if (!game.is_goal(*it)) out.value[*it] = solve_state(*it);
    }
  } else {
    for (long iter = 0;; ++iter) {
      if (iter >= options.max_iterations) {
        throw DivergenceError("zero-sum value iteration did not converge within " +
                              std::to_string(options.max_iterations) + " iterations");
      }
      double delta = 0.0;
      for (std::size_t k = n; k-- > 0;) {
        const auto s = static_cast<StateIndex>(k);
        if (game.is_goal(s)) continue;
        const double v = solve_state(s);
        delta = std::max(delta, std::abs(v - out.value[s]));
        out.value[s] = v;
      }
      if (delta <= options.tolerance) break;
    }
  }
  out.security_value = out.value[game.start()];
  return out;
}

}  // namespace gabe
