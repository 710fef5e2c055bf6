#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gabe/analysis.hpp"
#include "gabe/experts.hpp"
#include "gabe/rsg.hpp"

namespace gabe {

// `name` or `name?key=value&key=value`.
struct AgentSpec {
  std::string name;
  std::map<std::string, std::string> params;

  std::string to_string() const;
};

// Throws ConfigError on malformed text or an unregistered name.
AgentSpec parse_agent_spec(const std::string& text);

// coop, bully, folkegal, maximin, bouncer, mbrl, cfr, cfr-ne, then gabe-<algo>
// for each registered expert algorithm.
std::vector<std::string> agent_names();

// Runs one expert as a complete agent, keeping its opponent model current.
class ExpertAgent final : public Agent {
 public:
  ExpertAgent(std::string name, ExpertContext ctx, std::unique_ptr<Expert> expert);

  std::string name() const override { return name_; }
  void begin_round(int round) override { expert_->begin_round(round); }
  int act(StateIndex s) override { return expert_->act(s); }
  void observe(const Move& move) override;
  void end_round(double own_total) override { expert_->end_round(own_total); }

  Expert& expert() { return *expert_; }

 private:
  std::string name_;
  ExpertContext ctx_;
  std::unique_ptr<Expert> expert_;
};

// Plays a fixed stationary mixed policy.
class PolicyAgent final : public Agent {
 public:
  PolicyAgent(std::string name, MixedPolicy policy, std::shared_ptr<Rng> rng)
      : name_(std::move(name)), policy_(std::move(policy)), rng_(std::move(rng)) {}

  std::string name() const override { return name_; }
  int act(StateIndex s) override { return sample_index(policy_[s], *rng_); }

 private:
  std::string name_;
  MixedPolicy policy_;
  std::shared_ptr<Rng> rng_;
};

// Builds a fresh agent for `seat`. Parameters by name:
//   mbrl?epsilon=E   bouncer?rate=R   cfr?iterations=K
//   gabe-exp3?gamma=G   gabe-eee?explore=S
// Unknown names or parameters throw ConfigError.
std::unique_ptr<Agent> make_agent(const AgentSpec& spec, const GameAnalysis& analysis, Seat seat,
                                  std::shared_ptr<Rng> rng);

}  // namespace gabe
