#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "gabe/analysis.hpp"
#include "gabe/bandit.hpp"
#include "gabe/errors.hpp"
#include "gabe/games/config.hpp"
#include "gabe/harness.hpp"
#include "gabe/opponents.hpp"

namespace gabe::cli {

namespace {

namespace fs = std::filesystem;

struct GameFlags {
  std::string game;
  std::string config;

  void add(CLI::App* cmd) {
    cmd->add_option("--game", game, "microgrid, gridpd or blocks")->required();
    cmd->add_option("--config", config, "game config JSON (default: bundled config)");
  }

  std::shared_ptr<const GameAnalysis> analysis(AnalysisOptions options = {}) const {
    if (!games::is_game_name(game)) {
      throw ConfigError("unknown game '" + game + "'; valid games: microgrid, gridpd, blocks");
    }
    std::optional<fs::path> explicit_path;
    if (!config.empty()) explicit_path = config;
    auto rsg = games::load_game(game, explicit_path);
    return GameAnalysis::build(*rsg, std::move(options));
  }
};

std::string num(double x, const char* fmt = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const double w = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      if (!(w >= 0.0 && w <= 1.0)) throw ConfigError("omega " + item + " outside [0, 1]");
      grid.push_back(w);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("malformed omega '" + item + "' in --omega-grid");
    }
  }
  if (grid.empty()) throw ConfigError("--omega-grid must list at least one weight");
  return grid;
}

std::vector<AgentSpec> parse_roster(const std::string& text) {
  std::vector<AgentSpec> roster;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) roster.push_back(parse_agent_spec(item));
  if (roster.empty()) throw ConfigError("--roster must list at least one agent");
  return roster;
}

Seat parse_seat(int player) {
  if (player != 1 && player != 2) throw ConfigError("player must be 1 or 2");
  return seat_from_index(player - 1);
}

int jobs_or_default(int jobs) {
  if (jobs > 0) return jobs;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void cmd_solve(const GameFlags& g, const std::string& grid_text, bool experts, int player,
               const std::string& csv_path, std::ostream& out) {
  AnalysisOptions options;
  if (!grid_text.empty()) options.omega_grid = parse_grid(grid_text);
  const auto analysis = g.analysis(options);
  const Seat seat = parse_seat(player);
  const auto& cands = analysis->candidates();
  const auto& chosen = analysis->targets(seat);
  const std::size_t egal = egalitarian_index(cands, seat);
  const TabularGame& game = *analysis->game();

  out << "game " << game.name() << ": " << game.num_states() << " states, "
      << (game.acyclic() ? "acyclic" : "cyclic") << "\n";
  out << "security values: player 1 " << num(analysis->security(Seat::first)->security_value)
      << ", player 2 " << num(analysis->security(Seat::second)->security_value) << "\n\n";

  auto slot_of = [&](const TargetSolution& t) {
    for (std::size_t k = 0; k < chosen.size(); ++k) {
      if (chosen[k].label() == t.label()) return static_cast<int>(k) + 1;
    }
    return 0;
  };
  char line[512];
  std::snprintf(line, sizeof line, "%-40s %-12s %12s %12s %6s\n", "target", "kind", "player 1",
                "player 2", "slot");
  out << line;
  for (std::size_t k = 0; k < cands.size(); ++k) {
    const auto& t = cands[k];
    const int slot = slot_of(t);
    std::string label = t.label() + (k == egal ? " *egalitarian" : "");
    std::snprintf(line, sizeof line, "%-40s %-12s %12.4f %12.4f %6s\n", label.c_str(),
                  t.alternating() ? "alternating" : "pure", t.payoff.first, t.payoff.second,
                  slot ? std::to_string(slot).c_str() : "-");
    out << line;
  }

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw Error("cannot write " + csv_path);
    csv << "target,kind,payoff_p1,payoff_p2,slot,egalitarian\n";
    for (std::size_t k = 0; k < cands.size(); ++k) {
      const auto& t = cands[k];
      csv << '"' << t.label() << "\"," << (t.alternating() ? "alternating" : "pure") << ','
          << num(t.payoff.first) << ',' << num(t.payoff.second) << ',' << slot_of(t) << ','
          << (k == egal ? 1 : 0) << '\n';
    }
  }

  if (experts) {
    auto ctx = make_context(analysis->game(), seat, std::make_shared<Rng>(0));
    const auto set = build_expert_set(ctx, chosen, analysis->egalitarian(seat).payoff.of(seat),
                                      analysis->security(seat), analysis->security(opponent(seat)));
    out << "\nexperts for player " << player << " (" << set.size() << "):\n";
    for (std::size_t k = 0; k < set.size(); ++k) {
      out << "  " << k << "  " << set[k]->name() << "\n";
    }
  }
}

void cmd_match(const GameFlags& g, const std::string& a, const std::string& b, int rounds,
               std::uint64_t seed, int player_a, const std::string& raw_out, std::ostream& out) {
  const AgentSpec spec_a = parse_agent_spec(a);
  const AgentSpec spec_b = parse_agent_spec(b);
  const Seat seat_a = parse_seat(player_a);
  if (rounds < 0) throw ConfigError("--rounds must be >= 0");
  const auto analysis = g.analysis();
  const MatchResult m = run_match(*analysis, spec_a, spec_b, rounds, seed, seat_a);
  double sum_b = 0.0;
  for (const auto& p : m.payoffs) sum_b += p.second;
  const double mean_b = m.payoffs.empty() ? 0.0 : sum_b / static_cast<double>(m.payoffs.size());
  out << "agent_a,agent_b,seat_a,rounds,seed,mean_a,mean_b\n"
      << m.agent_a << ',' << m.agent_b << ',' << player_a << ',' << m.rounds << ',' << seed << ','
      << num(m.mean_a()) << ',' << num(mean_b) << '\n';
  if (m.truncated_rounds > 0) out << "truncated rounds: " << m.truncated_rounds << '\n';
  if (!raw_out.empty()) write_raw_match(m, raw_out);
}

void cmd_tournament(const GameFlags& g, const std::string& roster_text, int trials, int rounds,
                    std::uint64_t seed, const std::string& out_dir, int jobs, std::ostream& out) {
  const auto roster = parse_roster(roster_text);
  if (trials < 1) throw ConfigError("--trials must be >= 1");
  if (rounds < 1) throw ConfigError("--rounds must be >= 1");
  const auto analysis = g.analysis();
  const auto t0 = std::chrono::steady_clock::now();
  const TournamentRun run =
      run_tournament(*analysis, roster, {trials, rounds, seed, jobs_or_default(jobs)});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const fs::path dir(out_dir);
  fs::create_directories(dir / "raw");
  write_tournament_csv(run.table, dir / "tournament.csv");
  for (const MatchResult& m : run.matches) {
    write_raw_match(m, dir / "raw" / raw_match_filename(m));
  }
  std::ofstream names(dir / "roster.txt");
  for (const auto& n : run.table.roster) names << n << '\n';
  if (!names) throw Error("cannot write " + (dir / "roster.txt").string());

  out << format_table(run.table);
  out << "\n" << run.matches.size() << " matches in " << num(secs, "%.1f") << " s; wrote "
      << (dir / "tournament.csv").string() << "\n";
}

void cmd_report(const std::string& in_dir, int horizon, const std::string& out_path,
                std::ostream& out) {
  const fs::path dir(in_dir);
  const fs::path raw = fs::is_directory(dir / "raw") ? dir / "raw" : dir;
  const auto matches = read_raw_dir(raw);
  if (matches.empty()) throw ConfigError("no raw match files under " + raw.string());
  std::vector<std::string> roster;
  std::ifstream names(dir / "roster.txt");
  for (std::string line; std::getline(names, line);) {
    if (!line.empty()) roster.push_back(line);
  }
  if (roster.empty()) {
    for (const auto& m : matches) {
      if (std::find(roster.begin(), roster.end(), m.agent_a) == roster.end()) {
        roster.push_back(m.agent_a);
      }
    }
  }
  const auto series = timeseries_from_matches(roster, matches, horizon);
  const fs::path target = out_path.empty() ? dir / "timeseries.csv" : fs::path(out_path);
  write_timeseries_csv(series, target);
  out << "agent,mean_over_horizon\n";
  for (const auto& s : series) {
    double sum = 0.0;
    for (double v : s.mean_payoff) sum += v;
    out << s.agent << ',' << num(sum / static_cast<double>(s.mean_payoff.size())) << '\n';
  }
  out << "wrote " << target.string() << "\n";
}

games::BlockTargets parse_constraints(const std::string& text) {
  games::BlockTargets t;
  if (text == "default") return t;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("malformed constraint '" + item + "'");
    const std::string key = item.substr(0, eq);
    double v = 0.0;
    try {
      v = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw ConfigError("malformed constraint value in '" + item + "'");
    }
    if (key == "spne") {
      t.spne = v;
    } else if (key == "squares") {
      t.square_sum = v;
    } else if (key == "mean") {
      t.alternation_mean = v;
    } else {
      throw ConfigError("unknown constraint '" + key + "' (expected spne, squares, mean)");
    }
  }
  return t;
}

std::string describe_blocks(const games::BlockConfig& c) {
  std::string s;
  for (const auto& b : c.blocks) {
    s += (s.empty() ? "" : " ") + games::to_string(b.color) + "-" + games::to_string(b.shape) +
         "-" + num(b.number, "%g");
  }
  return s;
}

std::string pair_text(RewardPair p) { return "(" + num(p.first, "%g") + ", " + num(p.second, "%g") + ")"; }

int cmd_verify_blocks(const std::string& constraints, int max_solutions, bool skip_six,
                      const std::string& config, std::ostream& out) {
  const auto targets = parse_constraints(constraints);
  if (max_solutions < 1) throw ConfigError("--max-solutions must be >= 1");
  games::BlockConfig shipped = games::BlockConfig::defaults();
  if (!config.empty()) {
    std::ifstream in(config);
    if (!in) throw ConfigError("cannot read " + config);
    std::stringstream text;
    text << in.rdbuf();
    shipped = games::parse_blocks(text.str());
  }

  auto report = [&](const char* title, const games::BlockConfig& c) {
    const auto s = games::summarize_blocks(c);
    out << title << ": " << describe_blocks(c) << "\n  spne " << pair_text(s.spne_low)
        << " (ties low) " << pair_text(s.spne_high) << " (ties high), square sum "
        << num(s.square_sum, "%g") << ", alternation mean " << num(s.alternation_mean(), "%g")
        << " -> " << (games::satisfies(s, targets) ? "ok" : "fails") << "\n";
    return games::satisfies(s, targets);
  };

  const bool shipped_ok = report("shipped set", shipped);

  const auto t0 = std::chrono::steady_clock::now();
  const auto found = games::search_block_numbers(shipped, targets, max_solutions);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out << "\nsearch over the shipped layout: " << found.solutions.size() << " solution(s), "
      << found.candidates_checked << " candidates, " << (found.exhausted ? "exhaustive" : "stopped early")
      << ", " << num(secs, "%.2f") << " s\n";
  for (std::size_t k = 0; k < found.solutions.size(); ++k) {
    report(("solution " + std::to_string(k + 1)).c_str(), found.solutions[k]);
  }

  if (!skip_six) {
    const auto six = games::search_block_numbers(games::six_block_layout(), targets, max_solutions);
    out << "\nsix-block layout (3 squares, 3 triangles): " << six.solutions.size()
        << " solution(s) among " << six.candidates_checked << " candidates ("
        << (six.exhausted ? "exhaustive" : "stopped early") << ")\n";
    for (std::size_t k = 0; k < six.solutions.size(); ++k) {
      report(("six-block solution " + std::to_string(k + 1)).c_str(), six.solutions[k]);
    }
  }
  return shipped_ok && !found.solutions.empty() ? kExitOk : kExitRuntime;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Repeated stochastic game lab: planning, expert agents and tournaments", "gabe_lab"};
  app.require_subcommand(1);

  GameFlags solve_game, match_game, tour_game;
  std::string omega_grid, solve_csv;
  bool show_experts = false;
  int solve_player = 1;
  auto* solve = app.add_subcommand("solve", "enumerate and select target solutions");
  solve_game.add(solve);
  solve->add_option("--omega-grid", omega_grid, "comma-separated weights on player 1");
  solve->add_flag("--experts", show_experts, "also list the expert set");
  solve->add_option("--player", solve_player, "player whose targets are selected (1 or 2)");
  solve->add_option("--csv", solve_csv, "write the target table as CSV");

  std::string spec_a, spec_b, match_raw;
  int match_rounds = 365, match_player = 1;
  std::uint64_t match_seed = 0;
  auto* match = app.add_subcommand("match", "run one match");
  match_game.add(match);
  match->add_option("--a", spec_a, "agent spec of A")->required();
  match->add_option("--b", spec_b, "agent spec of B")->required();
  match->add_option("--rounds", match_rounds, "rounds");
  match->add_option("--seed", match_seed, "seed");
  match->add_option("--player-a", match_player, "seat of A (1 or 2)");
  match->add_option("--out", match_raw, "write raw per-round payoffs (.csv.gz)");

  std::string roster, tour_out;
  int trials = 25, tour_rounds = 365, jobs = 0;
  std::uint64_t tour_seed = 0;
  auto* tour = app.add_subcommand("tournament", "round-robin tournament with self-play");
  tour_game.add(tour);
  tour->add_option("--roster", roster, "comma-separated agent specs")->required();
  tour->add_option("--trials", trials, "trials per pairing");
  tour->add_option("--rounds", tour_rounds, "rounds per match");
  tour->add_option("--seed", tour_seed, "base seed");
  tour->add_option("--out", tour_out, "output directory")->required();
  tour->add_option("--jobs", jobs, "worker threads (default: logical cores)");

  std::string report_in, report_out;
  int horizon = 500;
  auto* rep = app.add_subcommand("report", "per-round time series from tournament raw files");
  rep->add_option("--in", report_in, "tournament output directory")->required();
  rep->add_option("--horizon", horizon, "rounds");
  rep->add_option("--out", report_out, "CSV path (default: <in>/timeseries.csv)");

  std::string constraints = "default", blocks_config;
  int max_solutions = 5;
  bool skip_six = false;
  auto* verify = app.add_subcommand("verify-blocks", "search block numbers for the published outcomes");
  verify->add_option("--constraints", constraints, "'default' or spne=X,squares=Y,mean=Z");
  verify->add_option("--max-solutions", max_solutions, "stop after this many solutions");
  verify->add_option("--config", blocks_config, "blocks config whose layout is searched");
  verify->add_flag("--skip-six", skip_six, "skip the six-block sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (solve->parsed()) {
      cmd_solve(solve_game, omega_grid, show_experts, solve_player, solve_csv, out);
    } else if (match->parsed()) {
      cmd_match(match_game, spec_a, spec_b, match_rounds, match_seed, match_player, match_raw, out);
    } else if (tour->parsed()) {
      cmd_tournament(tour_game, roster, trials, tour_rounds, tour_seed, tour_out, jobs, out);
    } else if (rep->parsed()) {
      cmd_report(report_in, horizon, report_out, out);
    } else if (verify->parsed()) {
      return cmd_verify_blocks(constraints, max_solutions, skip_six, blocks_config, out);
    }
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace gabe::cli
