#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gabe/planning.hpp"
#include "gabe/rsg.hpp"

namespace gabe {

// Per-state empirical action frequencies of one seat.
class FictitiousModel {
 public:
  FictitiousModel(const TabularGame& game, Seat modeled);

  Seat modeled() const { return modeled_; }
  // Adds one to the count of the modeled seat's action in `move`.
  void observe(const Move& move);
  void add(StateIndex s, int action, double count = 1.0);
  // Normalized counts; uniform at unvisited states.
  std::vector<double> predict(StateIndex s) const;
  double count(StateIndex s, int action) const { return counts_[offset_[s] + action]; }
  // Full per-state prediction, for planning against the model.
  MixedPolicy snapshot() const;
  // Increments on every observation.
  long version() const { return version_; }

 private:
  const TabularGame* game_;
  Seat modeled_;
  std::vector<std::size_t> offset_;
  std::vector<double> counts_;
  std::vector<double> totals_;
  long version_ = 0;
};

// Shared by all experts of one agent. The owner updates `opponent_model`.
struct ExpertContext {
  std::shared_ptr<const TabularGame> game;
  Seat self = Seat::first;
  std::shared_ptr<FictitiousModel> opponent_model;
  std::shared_ptr<Rng> rng;
};

ExpertContext make_context(std::shared_ptr<const TabularGame> game, Seat self,
                           std::shared_ptr<Rng> rng);

// Per-round strategy. act() is only called while the expert is followed;
// observe() and end_round() reach every expert of an agent.
class Expert : public Agent {
 public:
  explicit Expert(ExpertContext ctx) : ctx_(std::move(ctx)) {}

  const ExpertContext& context() const { return ctx_; }
  void begin_round(int round) override { round_ = round; }

 protected:
  const TabularGame& game() const { return *ctx_.game; }
  Seat self() const { return ctx_.self; }
  Seat other() const { return opponent(ctx_.self); }
  int round() const { return round_; }
  int sample(const std::vector<double>& p) { return sample_index(p, *ctx_.rng); }

  ExpertContext ctx_;
  int round_ = 1;
};

// Own component of the target plan's joint action at `s` for `round`.
int target_action(const TabularGame& game, const TargetSolution& target, Seat self, StateIndex s,
                  int round);

// Plays its part of the target unconditionally.
class FollowerExpert final : public Expert {
 public:
  FollowerExpert(ExpertContext ctx, TargetSolution target);
  std::string name() const override { return "follower[" + target_.label() + "]"; }
  int act(StateIndex s) override;
  const TargetSolution& target() const { return target_; }

 private:
  TargetSolution target_;
};

// Plays the maximin strategy of its own zero-sum view.
class MaximinExpert final : public Expert {
 public:
  MaximinExpert(ExpertContext ctx, std::shared_ptr<const SecurityProfile> security);
  std::string name() const override { return "maximin"; }
  int act(StateIndex s) override;

 private:
  std::shared_ptr<const SecurityProfile> security_;
};

// Exploration rate 1 / (1 + t / 20) in round t.
double mbrl_epsilon(int round);

// Best response to the fictitious model of the opponent, replanned lazily when
// the model changed since the last plan, with decaying uniform exploration.
class MbrlExpert final : public Expert {
 public:
  explicit MbrlExpert(ExpertContext ctx, double fixed_epsilon = -1.0);
  std::string name() const override { return "mbrl"; }
  void begin_round(int round) override;
  int act(StateIndex s) override;
  const BestResponse& plan();

 private:
  double fixed_epsilon_;
  double epsilon_ = 1.0;
  bool fresh_round_ = true;
  long planned_version_ = -1;
  BestResponse plan_;
};

// Q-values of both seats over joint actions, from the owner's perspective.
struct QTablePair {
  explicit QTablePair(const TabularGame& game, double learning_rate = 0.1);

  double& q_self(StateIndex s, int joint) { return self_[offset_[s] + joint]; }
  double& q_other(StateIndex s, int joint) { return other_[offset_[s] + joint]; }
  double q_self(StateIndex s, int joint) const { return self_[offset_[s] + joint]; }
  double q_other(StateIndex s, int joint) const { return other_[offset_[s] + joint]; }

  double learning_rate;

 private:
  std::vector<std::size_t> offset_;
  std::vector<double> self_;
  std::vector<double> other_;
};

// Q_p(s,a) += eta * (r_p + Q_p(s',a') - Q_p(s,a)) for both seats. `next_joint`
// < 0 marks a terminal successor whose value is 0.
void sarsa_update(QTablePair& q, StateIndex s, int joint, double r_self, double r_other,
                  StateIndex next, int next_joint);

// argmin over own actions of sum_b gamma(b) |Q_self(s,(a,b)) - Q_other(s,(a,b))|,
// lowest index on ties.
int bouncer_choice(const TabularGame& game, Seat self, const QTablePair& q, StateIndex s,
                   const std::vector<double>& opponent_prediction);

class BouncerExpert final : public Expert {
 public:
  explicit BouncerExpert(ExpertContext ctx, double learning_rate = 0.1);
  std::string name() const override { return "bouncer"; }
  int act(StateIndex s) override;
  void observe(const Move& move) override;
  void end_round(double own_total) override;
  const QTablePair& q() const { return q_; }

 private:
  QTablePair q_;
  bool pending_ = false;
  Move last_{};
};

// Conditions for punishing a deviation:
// (1) v_now + r_last < v_prev and (2) payoffs_so_far + v_now < alpha.
bool punish_condition(double v_prev, double v_now, double r_last, double payoffs_so_far,
                      double alpha);
double aspiration_update(double alpha_prev, double lambda, double round_total);
// True when punishment has extracted enough: realized <= counterfactual - delta.
bool leader_settle_punishment(double realized, double counterfactual, double delta);

struct LeaderParams {
  double lambda = 0.9;
  double delta = 0.0;
  double alpha0 = 0.0;
  int stuck_rounds = 100;  // punishment spells longer than this are flagged
};

// Own egalitarian payoff `egal` gives alpha0 = egal and delta = 1% of |egal|.
LeaderParams default_leader_params(double egalitarian_payoff);

class LeaderExpert final : public Expert {
 public:
  LeaderExpert(ExpertContext ctx, TargetSolution target,
               std::shared_ptr<const SecurityProfile> attack, LeaderParams params);
  std::string name() const override { return "leader[" + target_.label() + "]"; }
  int act(StateIndex s) override;
  void observe(const Move& move) override;
  void end_round(double own_total) override;

  const TargetSolution& target() const { return target_; }
  bool punishing() const { return punishing_; }
  double alpha() const { return alpha_; }
  double counterfactual() const { return counterfactual_; }
  double realized() const { return realized_; }
  int punished_rounds() const { return punished_rounds_; }
  // Number of punishment spells that outlasted `stuck_rounds`.
  int stuck_spells() const { return stuck_spells_; }

 private:
  TargetSolution target_;
  std::shared_ptr<const SecurityProfile> attack_;  // protects the opponent
  LeaderParams params_;
  double alpha_;
  double round_sum_ = 0.0;
  bool punishing_ = false;
  double counterfactual_ = 0.0;
  double realized_ = 0.0;
  int punished_rounds_ = 0;
  int stuck_spells_ = 0;
};

// Parameters shared by the experts of one agent.
struct ExpertSetOptions {
  double lambda = 0.9;
  double delta_fraction = 0.01;
  double sarsa_rate = 0.1;
};

// Leaders on each target, followers on each target, then maximin, MBRL and
// Bouncer: 2 * |targets| + 3 experts. Throws ConfigError on empty targets.
// `egalitarian_payoff` is the own payoff of the egalitarian target.
std::vector<std::unique_ptr<Expert>> build_expert_set(
    const ExpertContext& ctx, const std::vector<TargetSolution>& targets,
    double egalitarian_payoff, std::shared_ptr<const SecurityProfile> own_security,
    std::shared_ptr<const SecurityProfile> attack, const ExpertSetOptions& options = {});

}  // namespace gabe
