#include "gabe/analysis.hpp"

namespace gabe {

std::shared_ptr<const GameAnalysis> GameAnalysis::build(const Rsg& game, AnalysisOptions options) {
  return build(std::make_shared<const TabularGame>(enumerate_states(game)), std::move(options));
}

std::shared_ptr<const GameAnalysis> GameAnalysis::build(std::shared_ptr<const TabularGame> game,
                                                        AnalysisOptions options) {
  std::shared_ptr<GameAnalysis> a(new GameAnalysis());
  a->game_ = std::move(game);
  a->options_ = std::move(options);
  a->candidates_ = enumerate_targets(*a->game_, a->options_.omega_grid);
  for (Seat seat : {Seat::first, Seat::second}) {
    a->security_[index_of(seat)] =
        std::make_shared<const SecurityProfile>(solve_zero_sum(*a->game_, seat));
  }
  for (Seat seat : {Seat::first, Seat::second}) {
    a->targets_[index_of(seat)] = select_targets(a->candidates_, a->security_values(), seat,
                                                 a->options_.targets_per_agent);
    a->egalitarian_[index_of(seat)] = egalitarian_index(a->candidates_, seat);
  }
  return a;
}

const CfrState& GameAnalysis::cfr() const {
  std::call_once(cfr_once_, [this] {
    cfr_ = std::make_unique<CfrState>(
        cfr_train(*game_, options_.cfr_iterations, options_.cfr_state_bound));
  });
  return *cfr_;
}

}  // namespace gabe
