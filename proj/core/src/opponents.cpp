#include "gabe/opponents.hpp"

#include <algorithm>

#include "gabe/bandit.hpp"
#include "gabe/cfr.hpp"
#include "gabe/errors.hpp"

namespace gabe {

namespace {

const std::vector<std::string> kFixedNames = {"coop",    "bully", "folkegal", "maximin",
                                              "bouncer", "mbrl",  "cfr",      "cfr-ne"};

std::string joined_names() {
  std::string s;
  for (const auto& n : agent_names()) s += (s.empty() ? "" : ", ") + n;
  return s;
}

void allow_only(const AgentSpec& spec, std::initializer_list<const char*> keys) {
  for (const auto& [key, value] : spec.params) {
    bool ok = false;
    for (const char* k : keys) ok = ok || key == k;
    if (!ok) throw ConfigError("unknown parameter '" + key + "' for agent " + spec.name);
  }
}

double number_param(const AgentSpec& spec, const std::string& key, double fallback) {
  auto it = spec.params.find(key);
  if (it == spec.params.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used == it->second.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("parameter " + key + " of agent " + spec.name + " must be a number, got '" +
                    it->second + "'");
}

TargetSolution single_plan_target(const TabularGame& game, double omega, Seat self) {
  auto plan = std::make_shared<const JointPlan>(solve_joint_mdp(game, omega, self));
  const double first_weight = self == Seat::first ? omega : 1.0 - omega;
  return {{plan}, {{first_weight}}, plan->value_at(game.start())};
}

std::unique_ptr<Agent> wrap(const AgentSpec& spec, ExpertContext ctx, std::unique_ptr<Expert> e) {
  return std::make_unique<ExpertAgent>(spec.to_string(), std::move(ctx), std::move(e));
}

}  // namespace

std::string AgentSpec::to_string() const {
  std::string s = name;
  char sep = '?';
  for (const auto& [k, v] : params) {
    s += sep + k + "=" + v;
    sep = '&';
  }
  return s;
}

AgentSpec parse_agent_spec(const std::string& text) {
  AgentSpec spec;
  const auto q = text.find('?');
  spec.name = text.substr(0, q);
  if (q != std::string::npos) {
    std::string rest = text.substr(q + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      const auto amp = std::min(rest.find('&', pos), rest.size());
      const std::string item = rest.substr(pos, amp - pos);
      const auto eq = item.find('=');
      if (item.empty() || eq == std::string::npos || eq == 0) {
        throw ConfigError("malformed agent parameter '" + item + "' in '" + text +
                          "' (expected key=value)");
      }
      spec.params[item.substr(0, eq)] = item.substr(eq + 1);
      pos = amp + 1;
    }
  }
  const auto names = agent_names();
  if (std::find(names.begin(), names.end(), spec.name) == names.end()) {
    throw ConfigError("unknown agent '" + spec.name + "'; valid agents: " + joined_names());
  }
  return spec;
}

std::vector<std::string> agent_names() {
  std::vector<std::string> names = kFixedNames;
  for (const auto& algo : expert_algorithm_names()) names.push_back("gabe-" + algo);
  return names;
}

ExpertAgent::ExpertAgent(std::string name, ExpertContext ctx, std::unique_ptr<Expert> expert)
    : name_(std::move(name)), ctx_(std::move(ctx)), expert_(std::move(expert)) {}

void ExpertAgent::observe(const Move& move) {
  ctx_.opponent_model->observe(move);
  expert_->observe(move);
}

std::unique_ptr<Agent> make_agent(const AgentSpec& spec, const GameAnalysis& analysis, Seat seat,
                                  std::shared_ptr<Rng> rng) {
  const auto& game = analysis.game();
  const Seat other = opponent(seat);
  ExpertContext ctx = make_context(game, seat, std::move(rng));
  const double egal_own = analysis.egalitarian(seat).payoff.of(seat);
  const std::string& n = spec.name;

  if (n == "coop") {
    allow_only(spec, {});
    auto target = single_plan_target(*game, 0.0, seat);
    return wrap(spec, ctx, std::make_unique<FollowerExpert>(ctx, std::move(target)));
  }
  if (n == "bully" || n == "folkegal") {
    allow_only(spec, {});
    std::size_t idx = analysis.candidates().size();
    if (n == "folkegal") {
      idx = egalitarian_index(analysis.candidates(), seat);
    } else if (auto b = bully_index(analysis.candidates(), analysis.security_values(), seat)) {
      idx = *b;
    } else {
      idx = egalitarian_index(analysis.candidates(), seat);
    }
    return wrap(spec, ctx,
                std::make_unique<LeaderExpert>(ctx, analysis.candidates()[idx],
                                               analysis.security(other),
                                               default_leader_params(egal_own)));
  }
  if (n == "maximin") {
    allow_only(spec, {});
    return wrap(spec, ctx, std::make_unique<MaximinExpert>(ctx, analysis.security(seat)));
  }
  if (n == "bouncer") {
    allow_only(spec, {"rate"});
    return wrap(spec, ctx, std::make_unique<BouncerExpert>(ctx, number_param(spec, "rate", 0.1)));
  }
  if (n == "mbrl") {
    allow_only(spec, {"epsilon"});
    return wrap(spec, ctx, std::make_unique<MbrlExpert>(ctx, number_param(spec, "epsilon", -1.0)));
  }
  if (n == "cfr" || n == "cfr-ne") {
    allow_only(spec, n == "cfr" ? std::initializer_list<const char*>{"iterations"}
                                : std::initializer_list<const char*>{});
    const int k = n == "cfr" ? static_cast<int>(number_param(spec, "iterations", 10)) : 0;
    if (k < 0) throw ConfigError("cfr iterations must be >= 0");
    return std::make_unique<CfrAgent>(spec.to_string(), game, seat, analysis.cfr(), ctx.rng, k);
  }
  if (n.rfind("gabe-", 0) == 0) {
    const std::string algo = n.substr(5);
    const auto& targets = analysis.targets(seat);
    auto experts = build_expert_set(ctx, targets, egal_own, analysis.security(seat),
                                    analysis.security(other));
    auto algorithm =
        make_expert_algorithm(algo, static_cast<int>(experts.size()), spec.params);
    auto normalizer =
        make_normalizer(analysis.security(seat)->security_value, analysis.candidates(), seat);
    return std::make_unique<GabeAgent>(spec.to_string(), ctx, std::move(experts),
                                       std::move(algorithm), normalizer);
  }
  throw ConfigError("unknown agent '" + n + "'; valid agents: " + joined_names());
}

}  // namespace gabe
