#include <cmath>

#include "gabe/errors.hpp"
#include "gabe/experts.hpp"

namespace gabe {

FictitiousModel::FictitiousModel(const TabularGame& game, Seat modeled)
    : game_(&game), modeled_(modeled) {
  offset_.reserve(game.num_states() + 1);
  std::size_t total = 0;
  for (std::size_t k = 0; k < game.num_states(); ++k) {
    offset_.push_back(total);
    const auto s = static_cast<StateIndex>(k);
    if (!game.is_goal(s)) total += game.num_actions(s, modeled);
  }
  offset_.push_back(total);
  counts_.assign(total, 0.0);
  totals_.assign(game.num_states(), 0.0);
}

void FictitiousModel::observe(const Move& move) { add(move.state, move.action.of(modeled_)); }

void FictitiousModel::add(StateIndex s, int action, double count) {
  counts_[offset_[s] + action] += count;
  totals_[s] += count;
  ++version_;
}

std::vector<double> FictitiousModel::predict(StateIndex s) const {
  const std::size_t n = offset_[s + 1] - offset_[s];
  std::vector<double> p(n, n ? 1.0 / static_cast<double>(n) : 0.0);
  if (totals_[s] > 0.0) {
    for (std::size_t a = 0; a < n; ++a) p[a] = counts_[offset_[s] + a] / totals_[s];
  }
  return p;
}

MixedPolicy FictitiousModel::snapshot() const {
  MixedPolicy p(game_->num_states());
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!game_->is_goal(static_cast<StateIndex>(k))) p[k] = predict(static_cast<StateIndex>(k));
  }
  return p;
}

ExpertContext make_context(std::shared_ptr<const TabularGame> game, Seat self,
                           std::shared_ptr<Rng> rng) {
  auto model = std::make_shared<FictitiousModel>(*game, opponent(self));
  return {std::move(game), self, std::move(model), std::move(rng)};
}

int target_action(const TabularGame& game, const TargetSolution& target, Seat self, StateIndex s,
                  int round) {
  const int joint = target.plan_for_round(round).policy[s];
  return game.joint_action(s, joint).of(self);
}

FollowerExpert::FollowerExpert(ExpertContext ctx, TargetSolution target)
    : Expert(std::move(ctx)), target_(std::move(target)) {}

int FollowerExpert::act(StateIndex s) { return target_action(game(), target_, self(), s, round()); }

MaximinExpert::MaximinExpert(ExpertContext ctx, std::shared_ptr<const SecurityProfile> security)
    : Expert(std::move(ctx)), security_(std::move(security)) {
  if (security_->protect != self()) throw PreconditionError("maximin profile protects the wrong seat");
}

int MaximinExpert::act(StateIndex s) { return sample(security_->maximin[s]); }

double mbrl_epsilon(int round) { return 1.0 / (1.0 + round / 20.0); }

MbrlExpert::MbrlExpert(ExpertContext ctx, double fixed_epsilon)
    : Expert(std::move(ctx)), fixed_epsilon_(fixed_epsilon) {}

void MbrlExpert::begin_round(int round) {
  Expert::begin_round(round);
  epsilon_ = fixed_epsilon_ >= 0.0 ? fixed_epsilon_ : mbrl_epsilon(round);
  fresh_round_ = true;
}

const BestResponse& MbrlExpert::plan() {
  if (planned_version_ != ctx_.opponent_model->version()) {
    plan_ = best_response(game(), self(), ctx_.opponent_model->snapshot());
    planned_version_ = ctx_.opponent_model->version();
  }
  return plan_;
}

int MbrlExpert::act(StateIndex s) {
  // The plan is refreshed at most once per round, before the first move.
  if (fresh_round_ || plan_.policy.empty()) {
    plan();
    fresh_round_ = false;
  }
  if (epsilon_ > 0.0) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(*ctx_.rng) < epsilon_) {
      std::uniform_int_distribution<int> pick(0, game().num_actions(s, self()) - 1);
      return pick(*ctx_.rng);
    }
  }
  return plan_.policy[s];
}

QTablePair::QTablePair(const TabularGame& game, double rate) : learning_rate(rate) {
  if (!(rate > 0.0 && rate <= 1.0)) throw ConfigError("SARSA learning rate must lie in (0, 1]");
  std::size_t total = 0;
  for (std::size_t k = 0; k < game.num_states(); ++k) {
    offset_.push_back(total);
    const auto s = static_cast<StateIndex>(k);
    if (!game.is_goal(s)) total += game.num_joint(s);
  }
  offset_.push_back(total);
  self_.assign(total, 0.0);
  other_.assign(total, 0.0);
}

void sarsa_update(QTablePair& q, StateIndex s, int joint, double r_self, double r_other,
                  StateIndex next, int next_joint) {
  const double eta = q.learning_rate;
  const double next_self = next_joint < 0 ? 0.0 : q.q_self(next, next_joint);
  const double next_other = next_joint < 0 ? 0.0 : q.q_other(next, next_joint);
  q.q_self(s, joint) += eta * (r_self + next_self - q.q_self(s, joint));
  q.q_other(s, joint) += eta * (r_other + next_other - q.q_other(s, joint));
}

int bouncer_choice(const TabularGame& game, Seat self, const QTablePair& q, StateIndex s,
                   const std::vector<double>& gamma) {
  const Seat other = opponent(self);
  int best = 0;
  double best_u = 0.0;
  for (int a = 0; a < game.num_actions(s, self); ++a) {
    double u = 0.0;
    for (int b = 0; b < game.num_actions(s, other); ++b) {
      const int j = game.joint_index(s, JointAction::from(self, a, b));
      u += gamma[b] * std::abs(q.q_self(s, j) - q.q_other(s, j));
    }
    if (a == 0 || u < best_u - 1e-12) {
      best = a;
      best_u = u;
    }
  }
  return best;
}

BouncerExpert::BouncerExpert(ExpertContext ctx, double learning_rate)
    : Expert(std::move(ctx)), q_(*ctx_.game, learning_rate) {}

int BouncerExpert::act(StateIndex s) {
  return bouncer_choice(game(), self(), q_, s, ctx_.opponent_model->predict(s));
}

void BouncerExpert::observe(const Move& move) {
  const int joint = game().joint_index(move.state, move.action);
  if (pending_) {
    sarsa_update(q_, last_.state, game().joint_index(last_.state, last_.action),
                 last_.reward.of(self()), last_.reward.of(other()), move.state, joint);
  }
  last_ = move;
  pending_ = true;
}

void BouncerExpert::end_round(double) {
  if (!pending_) return;
  sarsa_update(q_, last_.state, game().joint_index(last_.state, last_.action),
               last_.reward.of(self()), last_.reward.of(other()), last_.next, -1);
  pending_ = false;
}

std::vector<std::unique_ptr<Expert>> build_expert_set(
    const ExpertContext& ctx, const std::vector<TargetSolution>& targets,
    double egalitarian_payoff, std::shared_ptr<const SecurityProfile> own_security,
    std::shared_ptr<const SecurityProfile> attack, const ExpertSetOptions& options) {
  if (targets.empty()) throw ConfigError("expert set needs at least one target solution");
  LeaderParams params = default_leader_params(egalitarian_payoff);
  params.lambda = options.lambda;
  params.delta = options.delta_fraction * std::abs(egalitarian_payoff);

  std::vector<std::unique_ptr<Expert>> experts;
  for (const TargetSolution& t : targets) {
    experts.push_back(std::make_unique<LeaderExpert>(ctx, t, attack, params));
  }
  for (const TargetSolution& t : targets) {
    experts.push_back(std::make_unique<FollowerExpert>(ctx, t));
  }
  experts.push_back(std::make_unique<MaximinExpert>(ctx, std::move(own_security)));
  experts.push_back(std::make_unique<MbrlExpert>(ctx));
  experts.push_back(std::make_unique<BouncerExpert>(ctx, options.sarsa_rate));
  return experts;
}

}  // namespace gabe
