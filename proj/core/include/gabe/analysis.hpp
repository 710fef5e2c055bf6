#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "gabe/cfr.hpp"
#include "gabe/planning.hpp"
#include "gabe/rsg.hpp"

namespace gabe {

struct AnalysisOptions {
  std::vector<double> omega_grid = default_omega_grid();
  int targets_per_agent = 5;
  long cfr_iterations = 10'000;
  std::size_t cfr_state_bound = kCfrStateBound;
};

// Planning outputs shared read-only by every agent built on one game. The
// CFR average strategy is trained on first request.
class GameAnalysis {
 public:
  static std::shared_ptr<const GameAnalysis> build(const Rsg& game, AnalysisOptions options = {});
  static std::shared_ptr<const GameAnalysis> build(std::shared_ptr<const TabularGame> game,
                                                   AnalysisOptions options = {});

  const std::shared_ptr<const TabularGame>& game() const { return game_; }
  const AnalysisOptions& options() const { return options_; }
  const std::vector<TargetSolution>& candidates() const { return candidates_; }
  // Zero-sum view protecting `seat`: its maximin policy and the attack on it.
  const std::shared_ptr<const SecurityProfile>& security(Seat seat) const {
    return security_[index_of(seat)];
  }
  RewardPair security_values() const {
    return {security_[0]->security_value, security_[1]->security_value};
  }
  const std::vector<TargetSolution>& targets(Seat seat) const { return targets_[index_of(seat)]; }
  const TargetSolution& egalitarian() const { return candidates_[egalitarian_[0]]; }
  const TargetSolution& egalitarian(Seat seat) const { return candidates_[egalitarian_[index_of(seat)]]; }
  // Throws ResourceLimitError for games CFR cannot walk.
  const CfrState& cfr() const;

 private:
  GameAnalysis() = default;

  std::shared_ptr<const TabularGame> game_;
  AnalysisOptions options_;
  std::vector<TargetSolution> candidates_;
  std::shared_ptr<const SecurityProfile> security_[2];
  std::vector<TargetSolution> targets_[2];
  std::size_t egalitarian_[2] = {0, 0};
  mutable std::once_flag cfr_once_;
  mutable std::unique_ptr<CfrState> cfr_;
};

}  // namespace gabe
