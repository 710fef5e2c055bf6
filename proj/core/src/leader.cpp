#include <cmath>

#include "gabe/errors.hpp"
#include "gabe/experts.hpp"

namespace gabe {

bool punish_condition(double v_prev, double v_now, double r_last, double payoffs_so_far,
                      double alpha) {
  return v_now + r_last < v_prev && payoffs_so_far + v_now < alpha;
}

double aspiration_update(double alpha_prev, double lambda, double round_total) {
  return lambda * alpha_prev + (1.0 - lambda) * round_total;
}

bool leader_settle_punishment(double realized, double counterfactual, double delta) {
  return realized <= counterfactual - delta;
}

LeaderParams default_leader_params(double egalitarian_payoff) {
  LeaderParams p;
  p.alpha0 = egalitarian_payoff;
  p.delta = 0.01 * std::abs(egalitarian_payoff);
  return p;
}

LeaderExpert::LeaderExpert(ExpertContext ctx, TargetSolution target,
                           std::shared_ptr<const SecurityProfile> attack, LeaderParams params)
    : Expert(std::move(ctx)),
      target_(std::move(target)),
      attack_(std::move(attack)),
      params_(params),
      alpha_(params.alpha0) {
  if (!(params_.lambda > 0.0 && params_.lambda < 1.0)) throw ConfigError("lambda must lie in (0, 1)");
  if (!(params_.delta >= 0.0)) throw ConfigError("delta must be >= 0");
  if (attack_->protect != other()) throw PreconditionError("attack profile targets the wrong seat");
}

int LeaderExpert::act(StateIndex s) {
  if (punishing_) return sample(attack_->attack[s]);
  return target_action(game(), target_, self(), s, round());
}

void LeaderExpert::observe(const Move& move) {
  const double r_self = move.reward.of(self());
  round_sum_ += r_self;
  if (punishing_) {
    realized_ += move.reward.of(other());
    return;
  }
  const JointPlan& plan = target_.plan_for_round(round());
  const int expected = game().joint_action(move.state, plan.policy[move.state]).of(other());
  if (move.action.of(other()) == expected) return;
  const double v_prev = plan.value(self(), move.state);
  const double v_now = plan.value(self(), move.next);
  if (!punish_condition(v_prev, v_now, r_self, round_sum_, alpha_)) return;
  punishing_ = true;
  punished_rounds_ = 0;
  counterfactual_ = plan.value(other(), move.state);
  realized_ = move.reward.of(other());
}

void LeaderExpert::end_round(double own_total) {
  alpha_ = aspiration_update(alpha_, params_.lambda, own_total);
  round_sum_ = 0.0;
  if (!punishing_) return;
  ++punished_rounds_;
  if (leader_settle_punishment(realized_, counterfactual_, params_.delta)) {
    punishing_ = false;
    return;
  }
  // Compliance next round would have paid the opponent its target share.
  counterfactual_ += target_.plan_for_round(round() + 1).value(other(), game().start());
  if (punished_rounds_ == params_.stuck_rounds) ++stuck_spells_;
}

}  // namespace gabe
