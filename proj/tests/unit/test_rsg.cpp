#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <functional>
#include <set>

#include "fixtures.hpp"
#include "gabe/errors.hpp"
#include "gabe/explicit_game.hpp"
#include "gabe/games/blocks.hpp"
#include "gabe/rsg.hpp"

namespace gabe {
namespace {

using testing::bfs_state_ids;

class FixedAgent : public Agent {
 public:
  explicit FixedAgent(int action, std::string name = "fixed") : action_(action), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  int act(StateIndex) override { return action_; }
  void observe(const Move& m) override { seen.push_back(m); }
  void end_round(double total) override { totals.push_back(total); }

  std::vector<Move> seen;
  std::vector<double> totals;

 private:
  int action_;
  std::string name_;
};

class RandomAgent : public Agent {
 public:
  RandomAgent(const TabularGame& g, Seat seat, std::uint64_t seed) : g_(g), seat_(seat), rng_(seed) {}
  std::string name() const override { return "random"; }
  int act(StateIndex s) override {
    std::uniform_int_distribution<int> pick(0, g_.num_actions(s, seat_) - 1);
    return pick(rng_);
  }

 private:
  const TabularGame& g_;
  Seat seat_;
  Rng rng_;
};

ExplicitRsg single_step() {
  ExplicitRsg g("single");
  g.add_state("s", 2, 3);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 3; ++b) g.set("s", {a, b}, {1, 2}, {{"end", 1.0}});
  }
  g.add_goal("end");
  g.set_start("s");
  return g;
}

// Random layered game: each layer's states lead to the next layer, the last
// to the goal, with random rewards and 1-3 random successors.
ExplicitRsg random_layered_game(Rng& rng, int layers, int width) {
  ExplicitRsg g("random");
  std::uniform_int_distribution<int> actions(1, 3);
  std::uniform_int_distribution<int> pick(0, width - 1);
  std::uniform_int_distribution<int> succ_count(1, 3);
  std::uniform_real_distribution<double> reward(-5.0, 5.0);
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  auto name = [](int layer, int k) { return "L" + std::to_string(layer) + "_" + std::to_string(k); };
  for (int layer = 0; layer < layers; ++layer) {
    for (int k = 0; k < width; ++k) {
      const int n1 = actions(rng);
      const int n2 = actions(rng);
      g.add_state(name(layer, k), n1, n2);
      for (int a = 0; a < n1; ++a) {
        for (int b = 0; b < n2; ++b) {
          std::vector<std::pair<std::string, double>> next;
          if (layer + 1 == layers) {
            next = {{"end", 1.0}};
          } else {
            const int c = succ_count(rng);
            double total = 0.0;
            for (int i = 0; i < c; ++i) {
              const double w = unit(rng);
              next.emplace_back(name(layer + 1, pick(rng)), w);
              total += w;
            }
            for (auto& [n, w] : next) w /= total;
          }
          g.set(name(layer, k), {a, b}, {reward(rng), reward(rng)}, next);
        }
      }
    }
  }
  g.add_goal("end");
  g.set_start(name(0, 0));
  return g;
}

TEST(RunRound, SingleStepGameGivesOneMoveWithItsRewards) {
  const auto g = single_step();
  const auto t = enumerate_states(g);
  FixedAgent a(1), b(2);
  Rng rng(1);
  const auto rec = run_round(t, a, b, rng, 10);
  ASSERT_EQ(rec.moves.size(), 1u);
  EXPECT_EQ(rec.total_first, 1.0);
  EXPECT_EQ(rec.total_second, 2.0);
  EXPECT_FALSE(rec.truncated);
  EXPECT_EQ(rec.moves[0].action, (JointAction{1, 2}));
  EXPECT_TRUE(t.is_goal(rec.moves[0].next));
}

TEST(RunRound, StayInPlaceAgentsAreTruncatedAtTheCap) {
  ExplicitRsg g("stay");
  g.add_state("s", 2, 2);
  g.set("s", {0, 0}, {0, 0}, {{"s", 1.0}});
  g.set("s", {0, 1}, {0, 0}, {{"end", 1.0}});
  g.set("s", {1, 0}, {0, 0}, {{"end", 1.0}});
  g.set("s", {1, 1}, {0, 0}, {{"end", 1.0}});
  g.add_goal("end");
  g.set_start("s");
  const auto t = enumerate_states(g);
  FixedAgent a(0), b(0);
  Rng rng(1);
  const auto rec = run_round(t, a, b, rng, 10);
  EXPECT_TRUE(rec.truncated);
  EXPECT_EQ(rec.moves.size(), 10u);
  EXPECT_FALSE(t.acyclic());
  EXPECT_EQ(t.default_move_cap(), 10 * static_cast<int>(t.num_states()));
}

TEST(RunRound, BothAgentsSeeEveryMoveAndTheirOwnTotal) {
  const auto g = testing::dilemma_fixture();
  const auto t = enumerate_states(*g);
  FixedAgent a(0), b(1);
  Rng rng(3);
  const auto rec = run_round(t, a, b, rng, 100);
  ASSERT_EQ(a.seen.size(), rec.moves.size());
  ASSERT_EQ(b.seen.size(), rec.moves.size());
  ASSERT_EQ(a.totals.size(), 1u);
  EXPECT_EQ(a.totals[0], rec.total_first);
  EXPECT_EQ(b.totals[0], rec.total_second);
  EXPECT_EQ(rec.total(Seat::second), rec.total_second);
}

TEST(RunRound, IllegalActionNamesTheAgent) {
  const auto g = single_step();
  const auto t = enumerate_states(g);
  FixedAgent a(0), b(7, "sloppy");
  Rng rng(1);
  try {
    run_round(t, a, b, rng, 10);
    FAIL() << "expected ContractViolation";
  } catch (const ContractViolation& e) {
    EXPECT_NE(std::string(e.what()).find("sloppy"), std::string::npos);
  }
}

TEST(RunRound, MoveCapMustBePositive) {
  const auto t = enumerate_states(single_step());
  FixedAgent a(0), b(0);
  Rng rng(1);
  EXPECT_THROW(run_round(t, a, b, rng, 0), ContractViolation);
}

TEST(RunRound, SameSeedReproducesTheRecord) {
  const auto g = testing::chance_fixture();
  const auto t = enumerate_states(*g);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    FixedAgent a1(1), b1(1), a2(1), b2(1);
    Rng r1(seed), r2(seed);
    const auto x = run_round(t, a1, b1, r1, 50);
    const auto y = run_round(t, a2, b2, r2, 50);
    ASSERT_EQ(x.moves.size(), y.moves.size());
    for (std::size_t k = 0; k < x.moves.size(); ++k) {
      EXPECT_EQ(x.moves[k].state, y.moves[k].state);
      EXPECT_EQ(x.moves[k].next, y.moves[k].next);
      EXPECT_EQ(x.moves[k].reward, y.moves[k].reward);
    }
    EXPECT_EQ(x.total_first, y.total_first);
  }
}

TEST(EnumerateStates, SingleStepGameHasStartAndGoal) {
  const auto t = enumerate_states(single_step());
  EXPECT_EQ(t.num_states(), 2u);
  EXPECT_FALSE(t.is_goal(t.start()));
  EXPECT_TRUE(t.acyclic());
}

TEST(EnumerateStates, FixtureMatchesBreadthFirstOracle) {
  const auto g = testing::dilemma_fixture();
  const auto t = enumerate_states(*g);
  const auto oracle = bfs_state_ids(*g);
  ASSERT_EQ(t.num_states(), oracle.size());
  for (std::size_t k = 0; k < t.num_states(); ++k) {
    EXPECT_TRUE(oracle.count(t.id(static_cast<StateIndex>(k)).bytes()));
  }
}

TEST(EnumerateStates, BlockGameCountMatchesTreeWalk) {
  const games::BlockGame g(games::BlockConfig::defaults());
  const auto t = enumerate_states(g);
  // Hands are disjoint subsets; walk the pick tree and collect (p1, p2) pairs.
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  const auto cfg = games::BlockConfig::defaults();
  const int n = static_cast<int>(cfg.blocks.size());
  std::function<void(std::uint32_t, std::uint32_t)> walk = [&](std::uint32_t h1, std::uint32_t h2) {
    if (!seen.insert({h1, h2}).second) return;
    const int c1 = std::popcount(h1);
    const int c2 = std::popcount(h2);
    if (c1 == 3 && c2 == 3) return;
    const bool p1_moves = c1 == c2;
    for (int k = 0; k < n; ++k) {
      if ((h1 | h2) >> k & 1U) continue;
      if (p1_moves) {
        walk(h1 | 1U << k, h2);
      } else {
        walk(h1, h2 | 1U << k);
      }
    }
  };
  walk(0, 0);
  EXPECT_EQ(t.num_states(), seen.size());
  EXPECT_EQ(t.num_states(), bfs_state_ids(g).size());
}

TEST(EnumerateStates, BoundIsEnforced) {
  const games::BlockGame g(games::BlockConfig::defaults());
  EXPECT_THROW(enumerate_states(g, 100), ResourceLimitError);
}

TEST(EnumerateStates, BadDistributionIsRejected) {
  ExplicitRsg g("bad");
  g.add_state("s", 1, 1);
  g.set("s", {0, 0}, {0, 0}, {{"end", 0.6}});
  g.add_goal("end");
  g.set_start("s");
  EXPECT_THROW(enumerate_states(g), ContractViolation);
}

TEST(EnumerateStates, NonFiniteRewardIsRejected) {
  ExplicitRsg g("nan");
  g.add_state("s", 1, 1);
  g.set("s", {0, 0}, {std::nan(""), 0}, {{"end", 1.0}});
  g.add_goal("end");
  g.set_start("s");
  EXPECT_THROW(enumerate_states(g), ContractViolation);
}

TEST(EnumerateStates, GoalStartIsRejected) {
  ExplicitRsg g("goal-start");
  g.add_goal("end");
  g.set_start("end");
  EXPECT_THROW(enumerate_states(g), ContractViolation);
}

TEST(TabularGame, JointIndexRoundTrips) {
  const auto t = enumerate_states(single_step());
  for (int j = 0; j < t.num_joint(t.start()); ++j) {
    EXPECT_EQ(t.joint_index(t.start(), t.joint_action(t.start(), j)), j);
  }
  EXPECT_EQ(t.joint_index(t.start(), {1, 2}), 1 * 3 + 2);
}

TEST(SampleIndex, FollowsTheDistribution) {
  Rng rng(11);
  const std::vector<double> p{0.2, 0.0, 0.5, 0.3};
  std::vector<int> counts(4, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[sample_index(p, rng)];
  EXPECT_EQ(counts[1], 0);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(counts[k] / static_cast<double>(n), p[k], 0.01);
}

TEST(StateId, EqualContentEqualIds) {
  EXPECT_EQ(StateId("a;b"), StateId(std::string("a;") + "b"));
  EXPECT_EQ(StateIdHash{}(StateId("x")), StateIdHash{}(StateId("x")));
}

// Property: on random layered games the compiled tables agree with the
// breadth-first oracle, every distribution sums to one, round totals equal
// the sums of move rewards, and seeded rounds reproduce.
TEST(RsgProperties, RandomLayeredGames) {
  Rng gen(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = random_layered_game(gen, 2 + trial % 4, 1 + trial % 5);
    const auto t = enumerate_states(g);
    EXPECT_EQ(t.num_states(), bfs_state_ids(g).size());
    EXPECT_TRUE(t.acyclic());
    for (std::size_t k = 0; k < t.num_states(); ++k) {
      const auto s = static_cast<StateIndex>(k);
      if (t.is_goal(s)) continue;
      for (int j = 0; j < t.num_joint(s); ++j) {
        double total = 0.0;
        for (const Outcome& o : t.outcomes(s, j)) {
          EXPECT_GE(o.probability, 0.0);
          total += o.probability;
        }
        EXPECT_NEAR(total, 1.0, 1e-9);
      }
    }
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      RandomAgent a(t, Seat::first, seed), b(t, Seat::second, seed + 100);
      RandomAgent a2(t, Seat::first, seed), b2(t, Seat::second, seed + 100);
      Rng r1(seed), r2(seed);
      const auto x = run_round(t, a, b, r1, t.default_move_cap());
      const auto y = run_round(t, a2, b2, r2, t.default_move_cap());
      double s1 = 0.0, s2 = 0.0;
      for (const Move& m : x.moves) {
        s1 += m.reward.first;
        s2 += m.reward.second;
      }
      EXPECT_EQ(s1, x.total_first);
      EXPECT_EQ(s2, x.total_second);
      EXPECT_FALSE(x.truncated);
      EXPECT_TRUE(t.is_goal(x.moves.back().next));
      EXPECT_EQ(x.total_first, y.total_first);
      EXPECT_EQ(x.moves.size(), y.moves.size());
    }
  }
}

}  // namespace
}  // namespace gabe
