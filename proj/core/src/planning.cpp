#include <algorithm>
#include <cmath>
#include <limits>

#include "gabe/errors.hpp"
#include "gabe/planning.hpp"
#include "mdp.hpp"

namespace gabe {

namespace detail {

namespace {

double tie_eps(double x) { return 1e-9 * std::max(1.0, std::abs(x)); }

double q_value(const FlatMdp& mdp, const FlatMdp::Choice& c, const std::vector<double>& v) {
  double q = c.reward;
  for (std::size_t k = c.out_begin; k < c.out_end; ++k) q += mdp.outs[k].probability * v[mdp.outs[k].next];
  return q;
}

}  // namespace

MdpSolution solve_flat(const TabularGame& game, const FlatMdp& mdp, const SolverOptions& options,
                       const char* what) {
  const std::size_t n = game.num_states();
  MdpSolution sol;
  sol.choice.assign(n, -1);
  sol.value.assign(n, 0.0);

  auto greedy = [&](StateIndex s) {
    const std::size_t b = mdp.first_choice[s];
    const std::size_t e = mdp.first_choice[s + 1];
    double best = -std::numeric_limits<double>::infinity();
    int arg = -1;
    for (std::size_t c = b; c < e; ++c) {
      const double q = q_value(mdp, mdp.choices[c], sol.value);
      if (arg < 0 || q > best + tie_eps(best)) {
        best = q;
        arg = static_cast<int>(c - b);
      }
    }
    return std::pair{best, arg};
  };

  if (game.acyclic()) {
    const auto order = game.topological_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if (game.is_goal(*it)) continue;
      const auto [best, arg] = greedy(*it);
      sol.value[*it] = best;
      sol.choice[*it] = arg;
    }
    return sol;
  }

  long iter = 0;
  for (;; ++iter) {
    if (iter >= options.max_iterations) {
      throw DivergenceError(std::string(what) + " did not converge within " +
                            std::to_string(options.max_iterations) + " iterations");
    }
    double delta = 0.0;
    for (std::size_t k = n; k-- > 0;) {
      const auto s = static_cast<StateIndex>(k);
      if (game.is_goal(s)) continue;
      const double v = greedy(s).first;
      if (!std::isfinite(v)) throw DivergenceError(std::string(what) + " produced a non-finite value");
      delta = std::max(delta, std::abs(v - sol.value[s]));
      sol.value[s] = v;
    }
    if (delta <= options.tolerance) break;
  }

  // Restrict to optimal choices and pick, by lowest index, one that reaches a
  // state closer to a goal; staying put can tie with progress in undiscounted
  // games and would never terminate.
  const double opt_tol = std::max(1e-7, 100 * options.tolerance);
  std::vector<char> optimal(mdp.choices.size(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    const auto s = static_cast<StateIndex>(k);
    if (game.is_goal(s)) continue;
    for (std::size_t c = mdp.first_choice[s]; c < mdp.first_choice[s + 1]; ++c) {
      const double q = q_value(mdp, mdp.choices[c], sol.value);
      optimal[c] = q >= sol.value[s] - opt_tol * std::max(1.0, std::abs(sol.value[s]));
    }
  }
  constexpr int kUnreached = std::numeric_limits<int>::max();
  std::vector<int> dist(n, kUnreached);
  for (std::size_t k = 0; k < n; ++k) {
    if (game.is_goal(static_cast<StateIndex>(k))) dist[k] = 0;
  }
  for (int layer = 1;; ++layer) {
    std::vector<std::size_t> fresh;
    for (std::size_t k = 0; k < n; ++k) {
      if (dist[k] != kUnreached) continue;
      const auto s = static_cast<StateIndex>(k);
      const std::size_t b = mdp.first_choice[s];
      for (std::size_t c = b; c < mdp.first_choice[s + 1] && sol.choice[s] < 0; ++c) {
        if (!optimal[c]) continue;
        const auto& ch = mdp.choices[c];
        for (std::size_t o = ch.out_begin; o < ch.out_end; ++o) {
          if (dist[mdp.outs[o].next] == layer - 1) {
            sol.choice[s] = static_cast<int>(c - b);
            fresh.push_back(k);
            break;
          }
        }
      }
    }
    if (fresh.empty()) break;
    for (std::size_t k : fresh) dist[k] = layer;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const auto s = static_cast<StateIndex>(k);
    if (game.is_goal(s) || sol.choice[s] >= 0) continue;
    for (std::size_t c = mdp.first_choice[s]; c < mdp.first_choice[s + 1]; ++c) {
      if (optimal[c]) {
        sol.choice[s] = static_cast<int>(c - mdp.first_choice[s]);
        break;
      }
    }
  }
  return sol;
}

}  // namespace detail

namespace {

using detail::FlatMdp;

// Values of a Markov chain given per-state rewards and successor lists, as an
// MDP with one choice per state.
std::vector<double> evaluate_chain(const TabularGame& game, const FlatMdp& chain,
                                   const SolverOptions& options, const char* what) {
  return detail::solve_flat(game, chain, options, what).value;
}

}  // namespace

JointPlan solve_joint_mdp(const TabularGame& game, double omega, Seat self,
                          const SolverOptions& options) {
  if (!(omega >= 0.0 && omega <= 1.0)) throw PreconditionError("omega must lie in [0, 1]");
  const std::size_t n = game.num_states();
  FlatMdp mdp;
  for (std::size_t k = 0; k < n; ++k) {
    const auto s = static_cast<StateIndex>(k);
    mdp.begin_state();
    if (game.is_goal(s)) continue;
    for (int j = 0; j < game.num_joint(s); ++j) {
      const RewardPair r = game.reward(s, j);
      mdp.add_choice(omega * r.of(self) + (1.0 - omega) * r.of(opponent(self)));
      for (const Outcome& o : game.outcomes(s, j)) mdp.add_outcome(o.next, o.probability);
    }
  }
  mdp.finish();
  const detail::MdpSolution sol = detail::solve_flat(game, mdp, options, "joint MDP");

  JointPlan plan;
  plan.omega = omega;
  plan.self = self;
  plan.policy = sol.choice;
  for (Seat seat : {Seat::first, Seat::second}) {
    FlatMdp chain;
    for (std::size_t k = 0; k < n; ++k) {
      const auto s = static_cast<StateIndex>(k);
      chain.begin_state();
      if (game.is_goal(s)) continue;
      const int j = plan.policy[s];
      chain.add_choice(game.reward(s, j).of(seat));
      for (const Outcome& o : game.outcomes(s, j)) chain.add_outcome(o.next, o.probability);
    }
    chain.finish();
    (seat == Seat::first ? plan.v_first : plan.v_second) =
        evaluate_chain(game, chain, options, "joint plan evaluation");
  }
  return plan;
}

BestResponse best_response(const TabularGame& game, Seat self, const MixedPolicy& opponent_policy,
                           const SolverOptions& options) {
  const std::size_t n = game.num_states();
  const Seat other = opponent(self);
  FlatMdp mdp;
  for (std::size_t k = 0; k < n; ++k) {
    const auto s = static_cast<StateIndex>(k);
    mdp.begin_state();
    if (game.is_goal(s)) continue;
    const auto& pi = opponent_policy[s];
    for (int a = 0; a < game.num_actions(s, self); ++a) {
      double r = 0.0;
      for (int b = 0; b < game.num_actions(s, other); ++b) {
        if (pi[b] > 0.0) r += pi[b] * game.reward(s, game.joint_index(s, JointAction::from(self, a, b))).of(self);
      }
      mdp.add_choice(r);
      for (int b = 0; b < game.num_actions(s, other); ++b) {
        if (pi[b] <= 0.0) continue;
        const int j = game.joint_index(s, JointAction::from(self, a, b));
        for (const Outcome& o : game.outcomes(s, j)) mdp.add_outcome(o.next, pi[b] * o.probability);
      }
    }
  }
  mdp.finish();
  detail::MdpSolution sol = detail::solve_flat(game, mdp, options, "best response");
  return {std::move(sol.choice), std::move(sol.value)};
}

std::vector<RewardPair> evaluate_profile(const TabularGame& game, const MixedPolicy& first,
                                         const MixedPolicy& second, const SolverOptions& options) {
  const std::size_t n = game.num_states();
  std::vector<RewardPair> out(n);
  for (Seat seat : {Seat::first, Seat::second}) {
    FlatMdp chain;
    for (std::size_t k = 0; k < n; ++k) {
      const auto s = static_cast<StateIndex>(k);
      chain.begin_state();
      if (game.is_goal(s)) continue;
      double r = 0.0;
      for (int a = 0; a < game.num_actions(s, Seat::first); ++a) {
        for (int b = 0; b < game.num_actions(s, Seat::second); ++b) {
          const double p = first[s][a] * second[s][b];
          if (p > 0.0) r += p * game.reward(s, game.joint_index(s, {a, b})).of(seat);
        }
      }
      chain.add_choice(r);
      for (int a = 0; a < game.num_actions(s, Seat::first); ++a) {
        for (int b = 0; b < game.num_actions(s, Seat::second); ++b) {
          const double p = first[s][a] * second[s][b];
          if (p <= 0.0) continue;
          for (const Outcome& o : game.outcomes(s, game.joint_index(s, {a, b}))) {
            chain.add_outcome(o.next, p * o.probability);
          }
        }
      }
    }
    chain.finish();
    const auto v = evaluate_chain(game, chain, options, "profile evaluation");
    for (std::size_t k = 0; k < n; ++k) (seat == Seat::first ? out[k].first : out[k].second) = v[k];
  }
  return out;
}

MixedPolicy uniform_policy(const TabularGame& game, Seat seat) {
  MixedPolicy p(game.num_states());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto s = static_cast<StateIndex>(k);
    if (game.is_goal(s)) continue;
    const int m = game.num_actions(s, seat);
    p[k].assign(m, 1.0 / m);
  }
  return p;
}

MixedPolicy deterministic_policy(const TabularGame& game, Seat seat,
                                 const std::vector<int>& actions) {
  MixedPolicy p(game.num_states());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto s = static_cast<StateIndex>(k);
    if (game.is_goal(s)) continue;
    p[k].assign(game.num_actions(s, seat), 0.0);
    p[k][actions[k]] = 1.0;
  }
  return p;
}

}  // namespace gabe
