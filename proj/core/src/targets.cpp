#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "gabe/errors.hpp"
#include "gabe/planning.hpp"

namespace gabe {

namespace {

constexpr double kEps = 1e-9;

bool same_payoff(RewardPair a, RewardPair b) {
  return std::abs(a.first - b.first) <= kEps && std::abs(a.second - b.second) <= kEps;
}

std::string omega_list(const std::vector<double>& omegas) {
  std::string s;
  for (double w : omegas) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%g", s.empty() ? "" : ",", w);
    s += buf;
  }
  return s;
}

// Strict preference between candidates scoring `score_a` and `score_b`, with
// the documented tie rules.
struct Ranker {
  const std::vector<TargetSolution>& c;
  Seat self;

  bool better(std::size_t a, double score_a, std::size_t b, double score_b) const {
    if (score_a > score_b + kEps) return true;
    if (score_a < score_b - kEps) return false;
    const double wa = c[a].own_omega(self);
    const double wb = c[b].own_omega(self);
    if (wa != wb) return wa < wb;
    if (c[a].alternating() != c[b].alternating()) return !c[a].alternating();
    return a < b;
  }

  template <class Score, class Allowed>
  std::optional<std::size_t> argmax(Score score, Allowed allowed) const {
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (!allowed(k)) continue;
      if (!best || better(k, score(k), *best, score(*best))) best = k;
    }
    return best;
  }
};

}  // namespace

double TargetSolution::own_omega(Seat seat) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& list : omegas) {
    for (double w : list) best = std::min(best, seat == Seat::first ? w : 1.0 - w);
  }
  return best;
}

std::string TargetSolution::label() const {
  if (!alternating()) return "MDP(" + omega_list(omegas[0]) + ")";
  return "MDP(" + omega_list(omegas[0]) + ")/MDP(" + omega_list(omegas[1]) + ")";
}

std::vector<double> default_omega_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 9; ++k) grid.push_back(k / 10.0);
  return grid;
}

std::vector<TargetSolution> enumerate_targets(const TabularGame& game,
                                              const std::vector<double>& omega_grid,
                                              const SolverOptions& options) {
  if (omega_grid.empty()) throw PreconditionError("omega grid must be non-empty");
  std::vector<TargetSolution> pure;
  for (double w : omega_grid) {
    auto plan = std::make_shared<const JointPlan>(solve_joint_mdp(game, w, Seat::first, options));
    const RewardPair v = plan->value_at(game.start());
    auto same = std::find_if(pure.begin(), pure.end(),
                             [&](const TargetSolution& t) { return same_payoff(t.payoff, v); });
    if (same != pure.end()) {
      same->omegas[0].push_back(w);
      continue;
    }
    pure.push_back({{plan}, {{w}}, v});
  }

  std::vector<TargetSolution> out = pure;
  for (std::size_t i = 0; i < pure.size(); ++i) {
    for (std::size_t j = i + 1; j < pure.size(); ++j) {
      const bool swap = pure[j].payoff.first < pure[i].payoff.first;
      const TargetSolution& a = swap ? pure[j] : pure[i];
      const TargetSolution& b = swap ? pure[i] : pure[j];
      TargetSolution alt;
      alt.plans = {a.plans[0], b.plans[0]};
      alt.omegas = {a.omegas[0], b.omegas[0]};
      alt.payoff = {(a.payoff.first + b.payoff.first) / 2.0,
                    (a.payoff.second + b.payoff.second) / 2.0};
      out.push_back(std::move(alt));
    }
  }
  return out;
}

std::size_t egalitarian_index(const std::vector<TargetSolution>& candidates, Seat self) {
  if (candidates.empty()) throw PreconditionError("no target candidates");
  const Ranker rank{candidates, self};
  return *rank.argmax(
      [&](std::size_t k) { return std::min(candidates[k].payoff.first, candidates[k].payoff.second); },
      [](std::size_t) { return true; });
}

std::optional<std::size_t> bully_index(const std::vector<TargetSolution>& candidates,
                                       RewardPair security, Seat self) {
  const Seat other = opponent(self);
  const Ranker rank{candidates, self};
  return rank.argmax([&](std::size_t i) { return candidates[i].payoff.of(self); },
                     [&](std::size_t i) {
                       return candidates[i].payoff.of(other) >= security.of(other) - kEps;
                     });
}

std::vector<TargetSolution> select_targets(const std::vector<TargetSolution>& candidates,
                                           RewardPair security, Seat self, int k) {
  if (candidates.empty()) throw PreconditionError("no target candidates");
  const Seat other = opponent(self);
  const Ranker rank{candidates, self};
  std::vector<std::size_t> chosen;
  auto take = [&](std::optional<std::size_t> idx) {
    if (!idx || static_cast<int>(chosen.size()) >= k) return;
    for (std::size_t c : chosen) {
      if (same_payoff(candidates[c].payoff, candidates[*idx].payoff)) return;
    }
    chosen.push_back(*idx);
  };

  take(egalitarian_index(candidates, self));
  take(bully_index(candidates, security, self));
  take(rank.argmax([&](std::size_t i) { return candidates[i].payoff.of(other); },
                   [&](std::size_t i) {
                     return candidates[i].payoff.of(self) >= security.of(self) - kEps;
                   }));

  while (static_cast<int>(chosen.size()) < k) {
    auto min_distance = [&](std::size_t i) {
      double d = std::numeric_limits<double>::infinity();
      for (std::size_t c : chosen) {
        d = std::min(d, std::hypot(candidates[i].payoff.first - candidates[c].payoff.first,
                                   candidates[i].payoff.second - candidates[c].payoff.second));
      }
      return d;
    };
    const auto next = rank.argmax(min_distance, [&](std::size_t i) { return min_distance(i) > kEps; });
    if (!next) break;
    chosen.push_back(*next);
  }

  std::vector<TargetSolution> out;
  for (std::size_t c : chosen) out.push_back(candidates[c]);
  return out;
}

}  // namespace gabe
