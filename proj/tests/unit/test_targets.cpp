#include <gtest/gtest.h>

#include <cstdio>

#include "fixtures.hpp"
#include "gabe/errors.hpp"
#include "gabe/games/microgrid.hpp"
#include "gabe/planning.hpp"

namespace gabe {
namespace {

std::string two_places(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

// One stage where joint action (0,0) pays `a` and every other pays `b`.
ExplicitRsg two_outcome_game(RewardPair a, RewardPair b) {
  ExplicitRsg g("two-outcome");
  g.add_state("s", 2, 1);
  g.set("s", {0, 0}, a, {{"end", 1.0}});
  g.set("s", {1, 0}, b, {{"end", 1.0}});
  g.add_goal("end");
  g.set_start("s");
  return g;
}

TargetSolution pure(RewardPair payoff, std::vector<double> omegas) {
  return {{std::make_shared<const JointPlan>()}, {std::move(omegas)}, payoff};
}

TargetSolution alternating(RewardPair payoff, std::vector<double> w0, std::vector<double> w1) {
  auto plan = std::make_shared<const JointPlan>();
  return {{plan, plan}, {std::move(w0), std::move(w1)}, payoff};
}

TEST(EnumerateTargets, AlternatingEntryAveragesThePair) {
  const auto t = testing::compile(two_outcome_game({11.3, 40.0}, {36.8, 32.7}));
  const auto targets = enumerate_targets(t, {0.1, 0.9});
  ASSERT_EQ(targets.size(), 3u);
  const auto& alt = targets[2];
  ASSERT_TRUE(alt.alternating());
  EXPECT_EQ(alt.payoff.first, (11.3 + 36.8) / 2.0);
  EXPECT_EQ(alt.payoff.second, (40.0 + 32.7) / 2.0);
  EXPECT_NEAR(alt.payoff.first, 24.05, 1e-12);
  EXPECT_NEAR(alt.payoff.second, 36.35, 1e-12);
  EXPECT_EQ(two_places(alt.payoff.first), "24.05");
  EXPECT_EQ(two_places(alt.payoff.second), "36.35");
}

TEST(EnumerateTargets, SingleWeightGivesOnePureTarget) {
  const auto t = testing::compile(two_outcome_game({11.3, 40.0}, {36.8, 32.7}));
  const auto targets = enumerate_targets(t, {0.5});
  ASSERT_EQ(targets.size(), 1u);
  EXPECT_FALSE(targets[0].alternating());
}

TEST(EnumerateTargets, EqualPayoffsMergeIntoOneEntry) {
  const auto t = testing::compile(two_outcome_game({11.3, 40.0}, {36.8, 32.7}));
  const auto targets = enumerate_targets(t, {0.1, 0.2, 0.9});
  ASSERT_EQ(targets.size(), 3u);
  EXPECT_EQ(targets[0].omegas[0], (std::vector<double>{0.1, 0.2}));
  EXPECT_EQ(targets[0].label(), "MDP(0.1,0.2)");
  EXPECT_EQ(targets[2].label(), "MDP(0.1,0.2)/MDP(0.9)");
}

TEST(EnumerateTargets, EmptyGridIsRejected) {
  const auto t = testing::compile(*testing::one_shot_dilemma());
  EXPECT_THROW(enumerate_targets(t, {}), PreconditionError);
}

// Property: every alternating payoff is exactly the mean of its two plans'
// start-state values, the plans are ordered by the first seat's payoff, and
// pure payoffs are pairwise distinct.
TEST(EnumerateTargetsProperties, AlternatingMeanIsExact) {
  const games::MicrogridGame micro(games::MicrogridConfig::defaults());
  std::vector<TabularGame> games;
  games.push_back(testing::compile(*testing::dilemma_fixture()));
  games.push_back(testing::compile(*testing::chance_fixture()));
  games.push_back(testing::compile(micro));
  for (const auto& t : games) {
    const auto targets = enumerate_targets(t, default_omega_grid());
    std::size_t n_pure = 0;
    for (const auto& target : targets) {
      if (!target.alternating()) {
        ++n_pure;
        EXPECT_EQ(target.payoff, target.plans[0]->value_at(t.start()));
        continue;
      }
      const RewardPair a = target.plans[0]->value_at(t.start());
      const RewardPair b = target.plans[1]->value_at(t.start());
      EXPECT_EQ(target.payoff.first, (a.first + b.first) / 2.0);
      EXPECT_EQ(target.payoff.second, (a.second + b.second) / 2.0);
      EXPECT_LE(a.first, b.first);
      EXPECT_EQ(&target.plan_for_round(1), target.plans[0].get());
      EXPECT_EQ(&target.plan_for_round(2), target.plans[1].get());
    }
    EXPECT_EQ(targets.size(), n_pure + n_pure * (n_pure - 1) / 2) << t.name();
    for (std::size_t i = 0; i < n_pure; ++i) {
      for (std::size_t j = i + 1; j < n_pure; ++j) EXPECT_NE(targets[i].payoff, targets[j].payoff);
    }
  }
}

// Pure payoff vectors of the published microgrid target table.
std::vector<TargetSolution> table_vectors() {
  return {pure({11.3, 40.0}, {0.1, 0.2}), pure({36.8, 32.7}, {0.3}), pure({38.3, 31.8}, {0.4}),
          pure({39.8, 30.3}, {0.5}),      pure({41.2, 28.6}, {0.6, 0.7}), pure({42.0, 26.3}, {0.8, 0.9})};
}

TEST(SelectTargets, EgalitarianComesFirst) {
  const auto picked = select_targets(table_vectors(), {0.0, 0.0}, Seat::first);
  ASSERT_FALSE(picked.empty());
  EXPECT_EQ(picked[0].payoff, (RewardPair{36.8, 32.7}));
  EXPECT_EQ(egalitarian_index(table_vectors(), Seat::first), 1u);
}

TEST(SelectTargets, SlotsFollowTheDocumentedOrder) {
  const auto picked = select_targets(table_vectors(), {0.0, 0.0}, Seat::first);
  ASSERT_EQ(picked.size(), 5u);
  EXPECT_EQ(picked[1].payoff, (RewardPair{42.0, 26.3}));  // best for self
  EXPECT_EQ(picked[2].payoff, (RewardPair{11.3, 40.0}));  // best for the other
  // Remaining slots maximize the distance to the chosen vectors.
  EXPECT_EQ(picked[3].payoff, (RewardPair{39.8, 30.3}));
  const auto other = select_targets(table_vectors(), {0.0, 0.0}, Seat::second);
  EXPECT_EQ(other[1].payoff, (RewardPair{11.3, 40.0}));
  EXPECT_EQ(other[2].payoff, (RewardPair{42.0, 26.3}));
}

TEST(SelectTargets, SecurityConstraintsFilterTheSecondAndThirdSlots) {
  // Player 2 needs 30: (41.2, 28.6) and (42.0, 26.3) no longer qualify.
  const auto picked = select_targets(table_vectors(), {0.0, 30.0}, Seat::first);
  EXPECT_EQ(picked[1].payoff, (RewardPair{39.8, 30.3}));
  EXPECT_EQ(bully_index(table_vectors(), {0.0, 30.0}, Seat::first), std::optional<std::size_t>(3));
}

TEST(SelectTargets, UnsatisfiableSlotIsSkipped) {
  const auto candidates = table_vectors();
  EXPECT_FALSE(bully_index(candidates, {0.0, 100.0}, Seat::first).has_value());
  const auto picked = select_targets(candidates, {0.0, 100.0}, Seat::first, 2);
  ASSERT_EQ(picked.size(), 2u);
  EXPECT_EQ(picked[0].payoff, (RewardPair{36.8, 32.7}));
  // Slot 2 skipped; slot 3 (best for the other) fills the second place.
  EXPECT_EQ(picked[1].payoff, (RewardPair{11.3, 40.0}));
}

TEST(SelectTargets, SmallCandidateSetsAreReturnedWhole) {
  const std::vector<TargetSolution> c{pure({1, 2}, {0.1}), pure({2, 1}, {0.9}), pure({0, 0}, {0.5})};
  EXPECT_EQ(select_targets(c, {0, 0}, Seat::first, 5).size(), 3u);
}

TEST(SelectTargets, EqualMinimumGoesToTheLowerOwnWeight) {
  const std::vector<TargetSolution> c{pure({5, 9}, {0.7}), pure({9, 5}, {0.2})};
  EXPECT_EQ(select_targets(c, {0, 0}, Seat::first, 1)[0].payoff, (RewardPair{9, 5}));
  // For the second seat the own weight is 1 - omega.
  EXPECT_EQ(select_targets(c, {0, 0}, Seat::second, 1)[0].payoff, (RewardPair{5, 9}));
}

TEST(SelectTargets, PureBeatsAlternatingOnEqualWeight) {
  const std::vector<TargetSolution> c{alternating({5, 5}, {0.3}, {0.6}), pure({5, 5}, {0.3})};
  const auto picked = select_targets(c, {0, 0}, Seat::first, 5);
  ASSERT_EQ(picked.size(), 1u);
  EXPECT_FALSE(picked[0].alternating());
}

TEST(SelectTargets, NeverExceedsK) {
  for (int k = 1; k <= 6; ++k) {
    EXPECT_LE(static_cast<int>(select_targets(table_vectors(), {0, 0}, Seat::first, k).size()), k);
  }
}

TEST(SelectTargets, EmptyCandidatesAreRejected) {
  EXPECT_THROW(select_targets({}, {0, 0}, Seat::first), PreconditionError);
}

}  // namespace
}  // namespace gabe
