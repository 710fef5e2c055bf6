#include "gabe/harness.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "gabe/errors.hpp"

namespace gabe {

namespace {

[[noreturn]] void rethrow_with_context(const std::string& context) {
  try {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(context + ": " + e.what());
  } catch (const PreconditionError& e) {
    throw PreconditionError(context + ": " + e.what());
  } catch (const ContractViolation& e) {
    throw ContractViolation(context + ": " + e.what());
  } catch (const ResourceLimitError& e) {
    throw ResourceLimitError(context + ": " + e.what());
  } catch (const DivergenceError& e) {
    throw DivergenceError(context + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(context + ": " + e.what());
  }
}

// Runs task(0..count-1) on `jobs` threads. The first exception by task index
// is rethrown after all threads finish.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& task) {
  std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs)
                                 : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(count, 1));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string fmt6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void open_for_write(std::ofstream& out, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out.open(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    stream};
  return Rng(seq);
}

double MatchResult::mean_a() const {
  if (payoffs.empty()) return 0.0;
  double sum = 0.0;
  for (const RewardPair& p : payoffs) sum += p.first;
  return sum / static_cast<double>(payoffs.size());
}

MatchResult run_match(const GameAnalysis& analysis, const AgentSpec& a, const AgentSpec& b,
                      int rounds, std::uint64_t seed, Seat seat_a) {
  const TabularGame& game = *analysis.game();
  MatchResult result;
  result.game = game.name();
  result.agent_a = a.to_string();
  result.agent_b = b.to_string();
  result.seed = seed;
  result.seat_a = seat_a;
  result.rounds = rounds;
  try {
    if (rounds < 0) throw ConfigError("rounds must be >= 0");
    Rng engine = make_stream(seed, 0);
    auto agent_a = make_agent(a, analysis, seat_a, std::make_shared<Rng>(make_stream(seed, 1)));
    auto agent_b =
        make_agent(b, analysis, opponent(seat_a), std::make_shared<Rng>(make_stream(seed, 2)));
    Agent& first = seat_a == Seat::first ? *agent_a : *agent_b;
    Agent& second = seat_a == Seat::first ? *agent_b : *agent_a;
    result.payoffs.reserve(rounds);
    for (int r = 1; r <= rounds; ++r) {
      const RoundRecord rec = run_round(game, first, second, engine, game.default_move_cap(), r);
      result.payoffs.push_back({rec.total(seat_a), rec.total(opponent(seat_a))});
      result.truncated_rounds += rec.truncated ? 1 : 0;
    }
  } catch (...) {
    rethrow_with_context("match " + result.agent_a + " vs " + result.agent_b + " on " +
                         result.game + " (seed " + std::to_string(seed) + ")");
  }
  return result;
}

TournamentTable aggregate_matches(const std::string& game, const std::vector<std::string>& roster,
                                  const std::vector<MatchResult>& matches) {
  const std::size_t n = roster.size();
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) pos[roster[i]] = i;
  std::vector<std::vector<std::vector<const MatchResult*>>> by_cell(
      n, std::vector<std::vector<const MatchResult*>>(n));
  for (const MatchResult& m : matches) {
    auto ia = pos.find(m.agent_a);
    auto ib = pos.find(m.agent_b);
    if (ia == pos.end() || ib == pos.end()) {
      throw ContractViolation("match " + m.agent_a + " vs " + m.agent_b + " is not in the roster");
    }
    by_cell[ia->second][ib->second].push_back(&m);
  }
  TournamentTable t;
  t.game = game;
  t.roster = roster;
  t.cell.assign(n, std::vector<double>(n, 0.0));
  t.row_average.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      auto& cell = by_cell[i][j];
      if (cell.empty()) {
        throw ContractViolation("no matches for " + roster[i] + " vs " + roster[j]);
      }
      std::sort(cell.begin(), cell.end(),
                [](const MatchResult* x, const MatchResult* y) { return x->seed < y->seed; });
      if (i == 0 && j == 0) {
        t.trials = static_cast<int>(cell.size());
        t.rounds = cell.front()->rounds;
      }
      if (static_cast<int>(cell.size()) != t.trials) {
        throw ContractViolation("uneven trial counts across pairings");
      }
      double sum = 0.0;
      for (const MatchResult* m : cell) {
        if (m->rounds != t.rounds) throw ContractViolation("uneven round counts across matches");
        sum += m->mean_a();
      }
      t.cell[i][j] = sum / static_cast<double>(cell.size());
    }
    double row = 0.0;
    for (double c : t.cell[i]) row += c;
    t.row_average[i] = row / static_cast<double>(n);
  }
  return t;
}

TournamentRun run_tournament(const GameAnalysis& analysis, const std::vector<AgentSpec>& roster,
                             const TournamentOptions& options) {
  if (roster.empty()) throw ConfigError("roster must not be empty");
  std::set<std::string> seen;
  for (const auto& spec : roster) {
    if (!seen.insert(spec.to_string()).second) {
      throw ConfigError("roster lists '" + spec.to_string() + "' twice");
    }
  }
  if (options.trials < 1) throw ConfigError("trials must be >= 1");
  if (options.rounds < 0) throw ConfigError("rounds must be >= 0");
  const std::size_t n = roster.size();
  const std::size_t trials = static_cast<std::size_t>(options.trials);
  TournamentRun run;
  run.matches.resize(n * n * trials);
  parallel_for(run.matches.size(), options.jobs, [&](std::size_t k) {
    const std::size_t trial = k % trials;
    const std::size_t col = (k / trials) % n;
    const std::size_t row = k / trials / n;
    run.matches[k] = run_match(analysis, roster[row], roster[col], options.rounds,
                               options.base_seed + trial, seat_from_index(trial % 2));
  });
  std::vector<std::string> names;
  for (const auto& s : roster) names.push_back(s.to_string());
  run.table = aggregate_matches(analysis.game()->name(), names, run.matches);
  return run;
}

std::vector<AgentSeries> timeseries_from_matches(const std::vector<std::string>& roster,
                                                 const std::vector<MatchResult>& matches,
                                                 int horizon) {
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  std::vector<AgentSeries> out;
  for (const std::string& agent : roster) {
    AgentSeries series{agent, std::vector<double>(horizon, 0.0)};
    std::size_t count = 0;
    for (const MatchResult& m : matches) {
      if (m.agent_a != agent) continue;
      if (m.rounds < horizon) {
        throw ConfigError("horizon " + std::to_string(horizon) + " exceeds the " +
                          std::to_string(m.rounds) + " recorded rounds");
      }
      for (int r = 0; r < horizon; ++r) series.mean_payoff[r] += m.payoffs[r].first;
      ++count;
    }
    if (count == 0) throw ContractViolation("no matches recorded for " + agent);
    for (double& v : series.mean_payoff) v /= static_cast<double>(count);
    out.push_back(std::move(series));
  }
  return out;
}

std::vector<AgentSeries> timeseries_report(const GameAnalysis& analysis,
                                           const std::vector<AgentSpec>& roster, int horizon,
                                           int trials, std::uint64_t base_seed, int jobs) {
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  TournamentOptions options{trials, horizon, base_seed, jobs};
  const TournamentRun run = run_tournament(analysis, roster, options);
  return timeseries_from_matches(run.table.roster, run.matches, horizon);
}

void write_tournament_csv(const TournamentTable& table, const std::filesystem::path& path) {
  std::ofstream out;
  open_for_write(out, path);
  out << "row_agent,col_agent,trials,rounds,mean_payoff\n";
  for (std::size_t i = 0; i < table.roster.size(); ++i) {
    for (std::size_t j = 0; j < table.roster.size(); ++j) {
      out << table.roster[i] << ',' << table.roster[j] << ',' << table.trials << ','
          << table.rounds << ',' << fmt6(table.cell[i][j]) << '\n';
    }
    out << table.roster[i] << ",Ave.," << table.trials << ',' << table.rounds << ','
        << fmt6(table.row_average[i]) << '\n';
  }
  if (!out) throw Error("failed writing " + path.string());
}

void write_timeseries_csv(const std::vector<AgentSeries>& series,
                          const std::filesystem::path& path) {
  std::ofstream out;
  open_for_write(out, path);
  out << "agent,round,mean_payoff\n";
  for (const AgentSeries& s : series) {
    for (std::size_t r = 0; r < s.mean_payoff.size(); ++r) {
      out << s.agent << ',' << r + 1 << ',' << fmt6(s.mean_payoff[r]) << '\n';
    }
  }
  if (!out) throw Error("failed writing " + path.string());
}

std::string format_table(const TournamentTable& table) {
  std::size_t width = 6;
  for (const auto& n : table.roster) width = std::max(width, n.size());
  std::ostringstream os;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-*s", static_cast<int>(width), "");
  os << buf;
  for (const auto& n : table.roster) {
    std::snprintf(buf, sizeof buf, " %*s", static_cast<int>(width), n.c_str());
    os << buf;
  }
  std::snprintf(buf, sizeof buf, " %*s\n", static_cast<int>(width), "Ave.");
  os << buf;
  for (std::size_t i = 0; i < table.roster.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%-*s", static_cast<int>(width), table.roster[i].c_str());
    os << buf;
    for (double c : table.cell[i]) {
      std::snprintf(buf, sizeof buf, " %*.2f", static_cast<int>(width), c);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, " %*.2f\n", static_cast<int>(width), table.row_average[i]);
    os << buf;
  }
  return os.str();
}

}  // namespace gabe
