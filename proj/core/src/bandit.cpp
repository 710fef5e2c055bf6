#include <algorithm>
#include <cmath>
#include <mutex>

#include "gabe/bandit.hpp"
#include "gabe/errors.hpp"

namespace gabe {

namespace {

constexpr double kOverflowGuard = 1e100;

double param_or(const AlgorithmParams& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("parameter " + key + " must be a number, got '" + it->second + "'");
  }
}

void check_keys(const AlgorithmParams& params, std::initializer_list<const char*> known,
                const std::string& algo) {
  for (const auto& [key, value] : params) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ConfigError("unknown parameter '" + key + "' for " + algo);
  }
}

struct Registry {
  std::mutex mutex;
  std::map<std::string, AlgorithmFactory> factories;

  Registry() {
    factories["exp3"] = [](int arms, const AlgorithmParams& p) {
      check_keys(p, {"gamma"}, "exp3");
      return std::make_unique<Exp3>(arms, param_or(p, "gamma", 0.1));
    };
    factories["eee"] = [](int arms, const AlgorithmParams& p) {
      check_keys(p, {"explore"}, "eee");
      return std::make_unique<Eee>(arms, param_or(p, "explore", 1.0));
    };
  }
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

Exp3::Exp3(int arms, double gamma) : weights_(arms, 1.0), gamma_(gamma) {
  if (arms < 1) throw ConfigError("exp3 needs at least one arm");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("exp3 gamma must lie in (0, 1]");
}

std::vector<double> Exp3::probabilities() const {
  double sum = 0.0;
  for (double w : weights_) sum += w;
  const double k = static_cast<double>(weights_.size());
  std::vector<double> p(weights_.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = (1.0 - gamma_) * weights_[i] / sum + gamma_ / k;
  return p;
}

void Exp3::set_weights(std::vector<double> w) {
  if (w.size() != weights_.size()) throw PreconditionError("weight count must equal arm count");
  for (double x : w) {
    if (!(x > 0.0) || !std::isfinite(x)) throw PreconditionError("weights must be positive");
  }
  weights_ = std::move(w);
}

int Exp3::select(int, Rng& rng) {
  last_probabilities_ = probabilities();
  if (arms() == 1) return 0;
  return sample_index(last_probabilities_, rng);
}

void Exp3::update(int index, double payoff) {
  const double p = last_probabilities_.empty() ? probabilities()[index] : last_probabilities_[index];
  update_with(index, payoff, p);
}

void Exp3::update_with(int pulled, double x, double p_pulled) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw ContractViolation("exp3 payoff " + std::to_string(x) + " outside [0, 1]");
  }
  if (!(p_pulled > 0.0)) throw ContractViolation("exp3 pull probability must be positive");
  const double k = static_cast<double>(weights_.size());
  // Log domain so a single large step cannot overflow before the rescale.
  const double log_pulled = std::log(weights_[pulled]) + gamma_ * (x / p_pulled) / k;
  double log_top = log_pulled;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (static_cast<int>(i) != pulled) log_top = std::max(log_top, std::log(weights_[i]));
  }
  if (log_top <= std::log(kOverflowGuard)) {
    weights_[pulled] = std::exp(log_pulled);
    return;
  }
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double lw = static_cast<int>(i) == pulled ? log_pulled : std::log(weights_[i]);
    weights_[i] = std::max(std::exp(lw - log_top), 1e-300);
  }
}

Eee::Eee(int arms, double explore_scale)
    : means_(arms, 0.0), pulls_(arms, 0), phases_on_(arms, 0), explore_scale_(explore_scale) {
  if (arms < 1) throw ConfigError("eee needs at least one arm");
  if (!(explore_scale >= 0.0)) throw ConfigError("eee explore scale must be >= 0");
}

int Eee::select(int, Rng& rng) {
  if (arms() == 1) return 0;
  if (remaining_ == 0) {
    ++phases_started_;
    const double explore_p =
        std::min(1.0, explore_scale_ / std::sqrt(static_cast<double>(phases_started_)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int best = -1;
    for (int k = 0; k < arms(); ++k) {
      if (pulls_[k] > 0 && (best < 0 || means_[k] > means_[best])) best = k;
    }
    last_explored_ = best < 0 || unit(rng) < explore_p;
    if (last_explored_) {
      std::uniform_int_distribution<int> pick(0, arms() - 1);
      current_ = pick(rng);
    } else {
      current_ = best;
    }
    remaining_ = 1 + phases_on_[current_];
    ++phases_on_[current_];
  }
  --remaining_;
  return current_;
}

void Eee::update(int index, double payoff) {
  if (!(payoff >= 0.0 && payoff <= 1.0)) {
    throw ContractViolation("eee payoff " + std::to_string(payoff) + " outside [0, 1]");
  }
  ++pulls_[index];
  means_[index] += (payoff - means_[index]) / static_cast<double>(pulls_[index]);
}

void register_expert_algorithm(const std::string& name, AlgorithmFactory factory) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  r.factories[name] = std::move(factory);
}

std::unique_ptr<ExpertAlgorithm> make_expert_algorithm(const std::string& name, int arms,
                                                       const AlgorithmParams& params) {
  auto& r = registry();
  AlgorithmFactory factory;
  {
    std::lock_guard lock(r.mutex);
    auto it = r.factories.find(name);
    if (it != r.factories.end()) factory = it->second;
  }
  if (!factory) {
    std::string names;
    for (const auto& n : expert_algorithm_names()) names += (names.empty() ? "" : ", ") + n;
    throw ConfigError("unknown expert algorithm '" + name + "' (registered: " + names + ")");
  }
  return factory(arms, params);
}

std::vector<std::string> expert_algorithm_names() {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  std::vector<std::string> names;
  for (const auto& [n, f] : r.factories) names.push_back(n);
  return names;
}

PayoffNormalizer::PayoffNormalizer(double lower, double upper) : lower_(lower), upper_(upper) {
  if (!(lower < upper)) {
    throw ConfigError("payoff normalizer needs lower < upper, got [" + std::to_string(lower) +
                      ", " + std::to_string(upper) + "]");
  }
}

double PayoffNormalizer::normalize(double round_total) {
  const double x = (round_total - lower_) / (upper_ - lower_);
  if (x < 0.0 || x > 1.0) {
    ++clamped_;
    return std::clamp(x, 0.0, 1.0);
  }
  return x;
}

PayoffNormalizer make_normalizer(double security_value, const std::vector<TargetSolution>& targets,
                                 Seat self) {
  const double lower = std::min(0.0, security_value);
  double best = lower;
  for (const TargetSolution& t : targets) best = std::max(best, t.payoff.of(self));
  return PayoffNormalizer(lower, best + 0.1 * (best - lower));
}

GabeAgent::GabeAgent(std::string name, ExpertContext ctx,
                     std::vector<std::unique_ptr<Expert>> experts,
                     std::unique_ptr<ExpertAlgorithm> algorithm, PayoffNormalizer normalizer)
    : name_(std::move(name)),
      ctx_(std::move(ctx)),
      experts_(std::move(experts)),
      algorithm_(std::move(algorithm)),
      normalizer_(normalizer) {
  if (experts_.empty()) throw ConfigError("gabe agent needs at least one expert");
  if (algorithm_->arms() != static_cast<int>(experts_.size())) {
    throw ConfigError("expert algorithm arm count differs from the expert count");
  }
}

void GabeAgent::begin_round(int round) {
  current_ = algorithm_->select(round, *ctx_.rng);
  selections_.push_back(current_);
  for (auto& e : experts_) e->begin_round(round);
}

int GabeAgent::act(StateIndex s) { return experts_[current_]->act(s); }

void GabeAgent::observe(const Move& move) {
  ctx_.opponent_model->observe(move);
  for (auto& e : experts_) e->observe(move);
}

void GabeAgent::end_round(double own_total) {
  algorithm_->update(current_, normalizer_.normalize(own_total));
  for (auto& e : experts_) e->end_round(own_total);
}

}  // namespace gabe
