#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gabe/experts.hpp"
#include "gabe/rsg.hpp"

namespace gabe {

// Selects one arm (expert) per round and learns from normalized round payoffs.
class ExpertAlgorithm {
 public:
  virtual ~ExpertAlgorithm() = default;
  virtual std::string name() const = 0;
  virtual int arms() const = 0;
  virtual int select(int round, Rng& rng) = 0;
  // `payoff` must lie in [0, 1].
  virtual void update(int index, double payoff) = 0;
};

class Exp3 final : public ExpertAlgorithm {
 public:
  Exp3(int arms, double gamma = 0.1);

  std::string name() const override { return "exp3"; }
  int arms() const override { return static_cast<int>(weights_.size()); }
  // Samples with p_k = (1 - gamma) w_k / sum(w) + gamma / K.
  int select(int round, Rng& rng) override;
  // Uses the probability under which `index` was last drawn.
  void update(int index, double payoff) override;
  // w_pulled *= exp(gamma * (x / p_pulled) / K); rescales by the maximum
  // weight when any weight exceeds the overflow guard.
  void update_with(int pulled, double x, double p_pulled);

  std::vector<double> probabilities() const;
  const std::vector<double>& weights() const { return weights_; }
  void set_weights(std::vector<double> w);
  double gamma() const { return gamma_; }

 private:
  std::vector<double> weights_;
  double gamma_;
  std::vector<double> last_probabilities_;
};

// Explore/exploit in phases. A new phase explores a uniform arm with
// probability scale / sqrt(phases started), otherwise exploits the best mean.
// A phase on an arm lasts 1 + (phases previously started on that arm) rounds.
class Eee final : public ExpertAlgorithm {
 public:
  explicit Eee(int arms, double explore_scale = 1.0);

  std::string name() const override { return "eee"; }
  int arms() const override { return static_cast<int>(means_.size()); }
  int select(int round, Rng& rng) override;
  void update(int index, double payoff) override;

  const std::vector<double>& means() const { return means_; }
  const std::vector<long>& pulls() const { return pulls_; }
  int remaining() const { return remaining_; }
  // Whether the most recent phase start was an exploration.
  bool last_phase_explored() const { return last_explored_; }

 private:
  std::vector<double> means_;
  std::vector<long> pulls_;
  std::vector<int> phases_on_;
  long phases_started_ = 0;
  double explore_scale_;
  int current_ = 0;
  int remaining_ = 0;
  bool last_explored_ = false;
};

using AlgorithmParams = std::map<std::string, std::string>;
using AlgorithmFactory =
    std::function<std::unique_ptr<ExpertAlgorithm>(int arms, const AlgorithmParams& params)>;

// Registry behind the gabe-<name> agent specs. exp3 and eee are built in;
// further algorithms (such as S++) plug in here.
void register_expert_algorithm(const std::string& name, AlgorithmFactory factory);
std::unique_ptr<ExpertAlgorithm> make_expert_algorithm(const std::string& name, int arms,
                                                       const AlgorithmParams& params = {});
std::vector<std::string> expert_algorithm_names();

// Maps round totals into [0, 1].
class PayoffNormalizer {
 public:
  PayoffNormalizer(double lower, double upper);

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  // clamp((R - lower) / (upper - lower), 0, 1); counts clamped inputs.
  double normalize(double round_total);
  long clamped() const { return clamped_; }

 private:
  double lower_;
  double upper_;
  long clamped_ = 0;
};

// lower = min(0, security), upper = best own target payoff widened by 10% of
// (best - lower).
PayoffNormalizer make_normalizer(double security_value, const std::vector<TargetSolution>& targets,
                                 Seat self);

// Game abstraction by experts: each round the algorithm picks an expert, the
// agent follows it for the whole round, then every expert observes the round
// and the algorithm is updated with the normalized round total.
class GabeAgent final : public Agent {
 public:
  GabeAgent(std::string name, ExpertContext ctx, std::vector<std::unique_ptr<Expert>> experts,
            std::unique_ptr<ExpertAlgorithm> algorithm, PayoffNormalizer normalizer);

  std::string name() const override { return name_; }
  void begin_round(int round) override;
  int act(StateIndex s) override;
  void observe(const Move& move) override;
  void end_round(double own_total) override;

  const std::vector<int>& selections() const { return selections_; }
  const std::vector<std::unique_ptr<Expert>>& experts() const { return experts_; }
  const ExpertAlgorithm& algorithm() const { return *algorithm_; }
  const PayoffNormalizer& normalizer() const { return normalizer_; }

 private:
  std::string name_;
  ExpertContext ctx_;
  std::vector<std::unique_ptr<Expert>> experts_;
  std::unique_ptr<ExpertAlgorithm> algorithm_;
  PayoffNormalizer normalizer_;
  std::vector<int> selections_;
  int current_ = 0;
};

}  // namespace gabe
