#include "gabe/cfr.hpp"

#include <algorithm>

#include "gabe/errors.hpp"

namespace gabe {

CfrState::CfrState(const TabularGame& game) {
  const std::size_t n = game.num_states();
  for (Seat seat : {Seat::first, Seat::second}) {
    SeatTables& t = seat_[index_of(seat)];
    std::size_t total = 0;
    for (std::size_t k = 0; k < n; ++k) {
      t.offset.push_back(total);
      const auto s = static_cast<StateIndex>(k);
      if (!game.is_goal(s)) total += game.num_actions(s, seat);
    }
    t.offset.push_back(total);
    t.regret.assign(total, 0.0);
    t.strategy_sum.assign(total, 0.0);
    t.sigma.assign(total, 0.0);
    refresh_sigma(t, game, seat);
    reach_cf_[index_of(seat)].assign(n, 0.0);
    reach_own_[index_of(seat)].assign(n, 0.0);
  }
  value_.assign(n, {});
}

void CfrState::refresh_sigma(SeatTables& t, const TabularGame& game, Seat) {
  for (std::size_t k = 0; k + 1 < t.offset.size(); ++k) {
    const std::size_t b = t.offset[k];
    const std::size_t e = t.offset[k + 1];
    if (b == e || game.is_goal(static_cast<StateIndex>(k))) continue;
    double positive = 0.0;
    for (std::size_t i = b; i < e; ++i) positive += std::max(0.0, t.regret[i]);
    for (std::size_t i = b; i < e; ++i) {
      t.sigma[i] = positive > 0.0 ? std::max(0.0, t.regret[i]) / positive
                                  : 1.0 / static_cast<double>(e - b);
    }
  }
}

void CfrState::step(const TabularGame& game, bool update_first, bool update_second,
                    const MixedPolicy* override_first, const MixedPolicy* override_second) {
  const auto order = game.topological_order();
  const SeatTables& t1 = seat_[0];
  const SeatTables& t2 = seat_[1];
  auto sigma1 = [&](StateIndex s, int a) {
    if (override_first && !(*override_first)[s].empty()) return (*override_first)[s][a];
    return t1.sigma[t1.offset[s] + a];
  };
  auto sigma2 = [&](StateIndex s, int b) {
    if (override_second && !(*override_second)[s].empty()) return (*override_second)[s][b];
    return t2.sigma[t2.offset[s] + b];
  };

  // Forward: counterfactual reach (other seat and chance) and own reach, each
  // summed over every history that ends in the state.
  for (int i = 0; i < 2; ++i) {
    std::fill(reach_cf_[i].begin(), reach_cf_[i].end(), 0.0);
    std::fill(reach_own_[i].begin(), reach_own_[i].end(), 0.0);
    reach_cf_[i][game.start()] = 1.0;
    reach_own_[i][game.start()] = 1.0;
  }
  for (StateIndex s : order) {
    if (game.is_goal(s)) continue;
    const int n1 = game.num_actions(s, Seat::first);
    const int n2 = game.num_actions(s, Seat::second);
    for (int a = 0; a < n1; ++a) {
      const double p1 = sigma1(s, a);
      for (int b = 0; b < n2; ++b) {
        const double p2 = sigma2(s, b);
        for (const Outcome& o : game.outcomes(s, a * n2 + b)) {
          reach_cf_[0][o.next] += reach_cf_[0][s] * p2 * o.probability;
          reach_cf_[1][o.next] += reach_cf_[1][s] * p1 * o.probability;
          reach_own_[0][o.next] += reach_own_[0][s] * p1;
          reach_own_[1][o.next] += reach_own_[1][s] * p2;
        }
      }
    }
  }

  // Backward: expected values under the current profile, regret and average
  // strategy accumulation.
  std::vector<double> q1, q2;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const StateIndex s = *it;
    if (game.is_goal(s)) {
      value_[s] = {};
      continue;
    }
    const int n1 = game.num_actions(s, Seat::first);
    const int n2 = game.num_actions(s, Seat::second);
    q1.assign(n1, 0.0);
    q2.assign(n2, 0.0);
    RewardPair v;
    for (int a = 0; a < n1; ++a) {
      const double p1 = sigma1(s, a);
      for (int b = 0; b < n2; ++b) {
        const double p2 = sigma2(s, b);
        const int j = a * n2 + b;
        RewardPair q = game.reward(s, j);
        for (const Outcome& o : game.outcomes(s, j)) {
          q.first += o.probability * value_[o.next].first;
          q.second += o.probability * value_[o.next].second;
        }
        q1[a] += p2 * q.first;
        q2[b] += p1 * q.second;
        v.first += p1 * p2 * q.first;
        v.second += p1 * p2 * q.second;
      }
    }
    value_[s] = v;
    if (update_first) {
      SeatTables& t = seat_[0];
      for (int a = 0; a < n1; ++a) {
        t.regret[t.offset[s] + a] += reach_cf_[0][s] * (q1[a] - v.first);
        t.strategy_sum[t.offset[s] + a] += reach_own_[0][s] * t.sigma[t.offset[s] + a];
      }
    }
    if (update_second) {
      SeatTables& t = seat_[1];
      for (int b = 0; b < n2; ++b) {
        t.regret[t.offset[s] + b] += reach_cf_[1][s] * (q2[b] - v.second);
        t.strategy_sum[t.offset[s] + b] += reach_own_[1][s] * t.sigma[t.offset[s] + b];
      }
    }
  }
  if (update_first) refresh_sigma(seat_[0], game, Seat::first);
  if (update_second) refresh_sigma(seat_[1], game, Seat::second);
  ++iterations_;
}

void CfrState::iterate(const TabularGame& game) { step(game, true, true, nullptr, nullptr); }

void CfrState::iterate_against(const TabularGame& game, Seat self,
                               const MixedPolicy& opponent_override) {
  if (self == Seat::first) {
    step(game, true, false, nullptr, &opponent_override);
  } else {
    step(game, false, true, &opponent_override, nullptr);
  }
}

MixedPolicy CfrState::average(Seat seat) const {
  const SeatTables& t = seat_[index_of(seat)];
  MixedPolicy p(t.offset.size() - 1);
  for (std::size_t k = 0; k < p.size(); ++k) {
    const std::size_t b = t.offset[k];
    const std::size_t e = t.offset[k + 1];
    if (b == e) continue;
    double sum = 0.0;
    for (std::size_t i = b; i < e; ++i) sum += t.strategy_sum[i];
    p[k].resize(e - b);
    for (std::size_t i = b; i < e; ++i) {
      p[k][i - b] = sum > 0.0 ? t.strategy_sum[i] / sum : 1.0 / static_cast<double>(e - b);
    }
  }
  return p;
}

MixedPolicy CfrState::current(Seat seat) const {
  const SeatTables& t = seat_[index_of(seat)];
  MixedPolicy p(t.offset.size() - 1);
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k].assign(t.sigma.begin() + static_cast<std::ptrdiff_t>(t.offset[k]),
                t.sigma.begin() + static_cast<std::ptrdiff_t>(t.offset[k + 1]));
  }
  return p;
}

CfrState cfr_train(const TabularGame& game, long iterations, std::size_t max_states) {
  if (!game.acyclic()) {
    throw ResourceLimitError("CFR needs an acyclic episodic game; '" + game.name() +
                             "' has cycles");
  }
  if (game.num_states() > max_states) {
    throw ResourceLimitError("CFR tree for '" + game.name() + "' has " +
                             std::to_string(game.num_states()) + " states, above the bound of " +
                             std::to_string(max_states) +
                             "; use a smaller game or raise the bound explicitly");
  }
  CfrState state(game);
  for (long k = 0; k < iterations; ++k) state.iterate(game);
  return state;
}

double exploitability(const TabularGame& game, const MixedPolicy& first,
                      const MixedPolicy& second) {
  const auto values = evaluate_profile(game, first, second);
  const double br1 = best_response(game, Seat::first, second).value[game.start()];
  const double br2 = best_response(game, Seat::second, first).value[game.start()];
  return (br1 - values[game.start()].first) + (br2 - values[game.start()].second);
}

CfrAgent::CfrAgent(std::string name, std::shared_ptr<const TabularGame> game, Seat self,
                   const CfrState& trained, std::shared_ptr<Rng> rng, int online_iterations)
    : name_(std::move(name)),
      game_(std::move(game)),
      self_(self),
      state_(trained),
      rng_(std::move(rng)),
      online_iterations_(online_iterations),
      model_(*game_, opponent(self)),
      policy_(state_.average(self)) {}

int CfrAgent::act(StateIndex s) { return sample_index(policy_[s], *rng_); }

void CfrAgent::observe(const Move& move) {
  if (online_iterations_ > 0) model_.observe(move);
}

void CfrAgent::end_round(double) {
  if (online_iterations_ <= 0) return;
  MixedPolicy empirical(game_->num_states());
  for (std::size_t k = 0; k < empirical.size(); ++k) {
    const auto s = static_cast<StateIndex>(k);
    if (game_->is_goal(s)) continue;
    bool visited = false;
    for (int b = 0; b < game_->num_actions(s, opponent(self_)); ++b) {
      visited = visited || model_.count(s, b) > 0.0;
    }
    if (visited) empirical[k] = model_.predict(s);
  }
  for (int k = 0; k < online_iterations_; ++k) state_.iterate_against(*game_, self_, empirical);
  policy_ = state_.average(self_);
}

}  // namespace gabe
