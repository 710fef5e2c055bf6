#pragma once

#include <cstddef>
#include <vector>

#include "gabe/experts.hpp"
#include "gabe/planning.hpp"
#include "gabe/rsg.hpp"

namespace gabe {

inline constexpr std::size_t kCfrStateBound = 200'000;

// Regret-matching self-play over the episodic game with one information set
// per seat per state. Iterations walk the acyclic state graph with reach
// probabilities summed over histories, which is the full tree walk of vanilla
// CFR folded onto the states.
class CfrState {
 public:
  explicit CfrState(const TabularGame& game);

  // One simultaneous update of both seats.
  void iterate(const TabularGame& game);
  // One update of `self` only, with the other seat's strategy replaced by
  // `opponent_override` wherever that entry is non-empty.
  void iterate_against(const TabularGame& game, Seat self, const MixedPolicy& opponent_override);

  MixedPolicy average(Seat seat) const;
  MixedPolicy current(Seat seat) const;
  long iterations() const { return iterations_; }

 private:
  struct SeatTables {
    std::vector<std::size_t> offset;  // per state, plus end
    std::vector<double> regret;
    std::vector<double> strategy_sum;
    std::vector<double> sigma;
  };

  void step(const TabularGame& game, bool update_first, bool update_second,
            const MixedPolicy* override_first, const MixedPolicy* override_second);
  void refresh_sigma(SeatTables& t, const TabularGame& game, Seat seat);

  SeatTables seat_[2];
  long iterations_ = 0;
  // Scratch buffers reused across iterations.
  std::vector<double> reach_cf_[2];
  std::vector<double> reach_own_[2];
  std::vector<RewardPair> value_;
};

// Throws ResourceLimitError unless the game is acyclic with at most
// `max_states` states.
CfrState cfr_train(const TabularGame& game, long iterations,
                   std::size_t max_states = kCfrStateBound);

// NashConv: sum over seats of best-response value minus profile value at the
// start state.
double exploitability(const TabularGame& game, const MixedPolicy& first,
                      const MixedPolicy& second);

// Plays the CFR average strategy. With `online_iterations` > 0 it also runs
// that many extra iterations after each round against the empirical model of
// the opponent at visited states.
class CfrAgent final : public Agent {
 public:
  CfrAgent(std::string name, std::shared_ptr<const TabularGame> game, Seat self,
           const CfrState& trained, std::shared_ptr<Rng> rng, int online_iterations);

  std::string name() const override { return name_; }
  int act(StateIndex s) override;
  void observe(const Move& move) override;
  void end_round(double own_total) override;

  const MixedPolicy& policy() const { return policy_; }

 private:
  std::string name_;
  std::shared_ptr<const TabularGame> game_;
  Seat self_;
  CfrState state_;
  std::shared_ptr<Rng> rng_;
  int online_iterations_;
  FictitiousModel model_;
  MixedPolicy policy_;
};

}  // namespace gabe
