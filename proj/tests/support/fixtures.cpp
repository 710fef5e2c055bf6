#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace gabe::testing {

namespace {

void stage(ExplicitRsg& g, const std::string& s, const std::vector<std::vector<RewardPair>>& r,
           const std::string& next) {
  const int rows = static_cast<int>(r.size());
  const int cols = static_cast<int>(r[0].size());
  g.add_state(s, rows, cols);
  for (int a = 0; a < rows; ++a) {
    for (int b = 0; b < cols; ++b) g.set(s, {a, b}, r[a][b], {{next, 1.0}});
  }
}

const std::vector<std::vector<RewardPair>> kDilemma = {{{3, 3}, {0, 5}}, {{5, 0}, {1, 1}}};

}  // namespace

std::shared_ptr<ExplicitRsg> dilemma_fixture() {
  auto g = std::make_shared<ExplicitRsg>("dilemma");
  g->add_state("pd", 2, 2);
  g->set("pd", {0, 0}, {3, 3}, {{"coord", 1.0}});
  g->set("pd", {0, 1}, {0, 5}, {{"pd2", 1.0}});
  g->set("pd", {1, 0}, {5, 0}, {{"pd2", 1.0}});
  g->set("pd", {1, 1}, {1, 1}, {{"pd2", 1.0}});
  stage(*g, "coord", {{{4, 1}, {0, 0}}, {{0, 0}, {1, 4}}}, "end");
  stage(*g, "pd2", kDilemma, "end");
  g->add_goal("end");
  g->set_start("pd");
  return g;
}

std::shared_ptr<ExplicitRsg> matching_pennies() {
  auto g = std::make_shared<ExplicitRsg>("pennies");
  stage(*g, "s", {{{1, -1}, {-1, 1}}, {{-1, 1}, {1, -1}}}, "end");
  g->add_goal("end");
  g->set_start("s");
  return g;
}

std::shared_ptr<ExplicitRsg> embedded_pennies() {
  auto g = std::make_shared<ExplicitRsg>("embedded-pennies");
  stage(*g, "open", {{{0, 0}}}, "s");
  stage(*g, "s", {{{1, -1}, {-1, 1}}, {{-1, 1}, {1, -1}}}, "end");
  g->add_goal("end");
  g->set_start("open");
  return g;
}

std::shared_ptr<ExplicitRsg> one_shot_dilemma() {
  auto g = std::make_shared<ExplicitRsg>("one-shot-dilemma");
  stage(*g, "s", kDilemma, "end");
  g->add_goal("end");
  g->set_start("s");
  return g;
}

std::shared_ptr<ExplicitRsg> chance_fixture() {
  auto g = std::make_shared<ExplicitRsg>("chance");
  g->add_state("open", 2, 2);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      g->set("open", {a, b}, {static_cast<double>(a), static_cast<double>(b)},
             {{"left", 0.25 + 0.5 * a * b}, {"right", 0.75 - 0.5 * a * b}});
    }
  }
  stage(*g, "left", kDilemma, "end");
  stage(*g, "right", {{{2, 1}, {0, 0}}, {{0, 0}, {1, 2}}}, "end");
  g->add_goal("end");
  g->set_start("open");
  return g;
}

std::shared_ptr<ExplicitRsg> loop_fixture() {
  auto g = std::make_shared<ExplicitRsg>("loop");
  g->add_state("s", 2, 1);
  g->set("s", {0, 0}, {1, 1}, {{"s", 0.5}, {"end", 0.5}});
  g->set("s", {1, 0}, {0, 3}, {{"end", 1.0}});
  g->add_goal("end");
  g->set_start("s");
  return g;
}

TabularGame compile(const Rsg& game) { return enumerate_states(game); }

std::set<std::string> bfs_state_ids(const Rsg& game) {
  std::set<std::string> seen{game.start_state().bytes()};
  std::deque<StateId> queue{game.start_state()};
  while (!queue.empty()) {
    const StateId s = queue.front();
    queue.pop_front();
    if (game.is_goal(s)) continue;
    const int n1 = static_cast<int>(game.actions(s, Seat::first).size());
    const int n2 = static_cast<int>(game.actions(s, Seat::second).size());
    for (int a = 0; a < n1; ++a) {
      for (int b = 0; b < n2; ++b) {
        for (const Transition& t : game.transition(s, {a, b})) {
          if (t.probability > 0.0 && seen.insert(t.next.bytes()).second) queue.push_back(t.next);
        }
      }
    }
  }
  return seen;
}

RewardPair joint_policy_value(const TabularGame& game, const std::vector<int>& joint_policy) {
  std::vector<RewardPair> memo(game.num_states());
  std::vector<char> done(game.num_states(), 0);
  std::function<RewardPair(StateIndex)> value = [&](StateIndex s) -> RewardPair {
    if (game.is_goal(s)) return {};
    if (done[s]) return memo[s];
    const int j = joint_policy[s];
    RewardPair v = game.reward(s, j);
    for (const Outcome& o : game.outcomes(s, j)) {
      const RewardPair next = value(o.next);
      v.first += o.probability * next.first;
      v.second += o.probability * next.second;
    }
    done[s] = 1;
    memo[s] = v;
    return v;
  };
  return value(game.start());
}

void for_each_joint_policy(const TabularGame& game,
                           const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<StateIndex> open;
  for (std::size_t k = 0; k < game.num_states(); ++k) {
    if (!game.is_goal(static_cast<StateIndex>(k))) open.push_back(static_cast<StateIndex>(k));
  }
  std::vector<int> policy(game.num_states(), -1);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == open.size()) {
      visit(policy);
      return;
    }
    for (int j = 0; j < game.num_joint(open[i]); ++j) {
      policy[open[i]] = j;
      rec(i + 1);
    }
  };
  rec(0);
}

double own_policy_value(const TabularGame& game, Seat seat, const std::vector<int>& own,
                        const MixedPolicy& other) {
  std::vector<double> memo(game.num_states(), 0.0);
  std::vector<char> done(game.num_states(), 0);
  std::function<double(StateIndex)> value = [&](StateIndex s) -> double {
    if (game.is_goal(s)) return 0.0;
    if (done[s]) return memo[s];
    double v = 0.0;
    const Seat opp = opponent(seat);
    for (int b = 0; b < game.num_actions(s, opp); ++b) {
      const double p = other[s][b];
      if (p == 0.0) continue;
      const int j = game.joint_index(s, JointAction::from(seat, own[s], b));
      double q = game.reward(s, j).of(seat);
      for (const Outcome& o : game.outcomes(s, j)) q += o.probability * value(o.next);
      v += p * q;
    }
    done[s] = 1;
    memo[s] = v;
    return v;
  };
  return value(game.start());
}

double brute_force_best_response(const TabularGame& game, Seat seat, const MixedPolicy& other) {
  std::vector<StateIndex> open;
  for (std::size_t k = 0; k < game.num_states(); ++k) {
    if (!game.is_goal(static_cast<StateIndex>(k))) open.push_back(static_cast<StateIndex>(k));
  }
  std::vector<int> own(game.num_states(), -1);
  double best = -std::numeric_limits<double>::infinity();
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == open.size()) {
      best = std::max(best, own_policy_value(game, seat, own, other));
      return;
    }
    for (int a = 0; a < game.num_actions(open[i], seat); ++a) {
      own[open[i]] = a;
      rec(i + 1);
    }
  };
  rec(0);
  return best;
}

double guaranteed(const std::vector<std::vector<double>>& m, const std::vector<double>& p) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < m[0].size(); ++c) {
    double v = 0.0;
    for (std::size_t r = 0; r < m.size(); ++r) v += p[r] * m[r][c];
    worst = std::min(worst, v);
  }
  return worst;
}

namespace {

// Best guaranteed payoff over mixtures with p_r = k_r * step, k_r in
// [lo_r, hi_r], sum k_r = total.
double grid_search(const std::vector<std::vector<double>>& m, int total, double step,
                   const std::vector<int>& lo, const std::vector<int>& hi, std::vector<int>& best_k) {
  const std::size_t n = m.size();
  std::vector<int> k(n, 0);
  std::vector<double> p(n, 0.0);
  double best = -std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, int)> rec = [&](std::size_t r, int left) {
    if (r + 1 == n) {
      if (left < lo[r] || left > hi[r]) return;
      k[r] = left;
      for (std::size_t i = 0; i < n; ++i) p[i] = k[i] * step;
      const double v = guaranteed(m, p);
      if (v > best) {
        best = v;
        best_k = k;
      }
      return;
    }
    for (int x = lo[r]; x <= std::min(hi[r], left); ++x) {
      k[r] = x;
      rec(r + 1, left - x);
    }
  };
  rec(0, total);
  return best;
}

}  // namespace

double grid_matrix_value(const std::vector<std::vector<double>>& m, double step) {
  const std::size_t n = m.size();
  if (n <= 3) {
    const int total = static_cast<int>(std::lround(1.0 / step));
    std::vector<int> best_k;
    return grid_search(m, total, step, std::vector<int>(n, 0), std::vector<int>(n, total), best_k);
  }
  // Coarse pass on a 0.01 grid, then the fine grid in a box around the coarse
  // optimum. The guaranteed payoff is concave in the mixture.
  const double coarse = 0.01;
  std::vector<int> best_k;
  grid_search(m, 100, coarse, std::vector<int>(n, 0), std::vector<int>(n, 100), best_k);
  const int total = static_cast<int>(std::lround(1.0 / step));
  const int scale = static_cast<int>(std::lround(coarse / step));
  const int radius = 3 * scale;
  std::vector<int> lo(n), hi(n);
  for (std::size_t r = 0; r < n; ++r) {
    lo[r] = std::max(0, best_k[r] * scale - radius);
    hi[r] = std::min(total, best_k[r] * scale + radius);
  }
  std::vector<int> fine_k;
  return grid_search(m, total, step, lo, hi, fine_k);
}

}  // namespace gabe::testing
