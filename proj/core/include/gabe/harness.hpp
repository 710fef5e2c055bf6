#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gabe/analysis.hpp"
#include "gabe/opponents.hpp"

namespace gabe {

// Independent random stream `stream` of a match seeded with `seed`.
// Streams: 0 engine, 1 agent A, 2 agent B.
Rng make_stream(std::uint64_t seed, std::uint32_t stream);

struct MatchResult {
  std::string game;
  std::string agent_a;
  std::string agent_b;
  std::uint64_t seed = 0;
  Seat seat_a = Seat::first;
  int rounds = 0;
  // Per round, ordered (A, B) whatever the seats.
  std::vector<RewardPair> payoffs;
  int truncated_rounds = 0;

  double mean_a() const;
};

// Fresh agents, `rounds` rounds played in order. Errors are rethrown with the
// match named in the message.
MatchResult run_match(const GameAnalysis& analysis, const AgentSpec& a, const AgentSpec& b,
                      int rounds, std::uint64_t seed, Seat seat_a = Seat::first);

struct TournamentOptions {
  int trials = 25;
  int rounds = 365;
  std::uint64_t base_seed = 0;
  int jobs = 0;  // 0: hardware concurrency
};

struct TournamentTable {
  std::string game;
  std::vector<std::string> roster;
  int trials = 0;
  int rounds = 0;
  // cell[row][col]: mean over trials of the row agent's mean round payoff.
  std::vector<std::vector<double>> cell;
  std::vector<double> row_average;
};

struct TournamentRun {
  TournamentTable table;
  // Index ((row * roster) + col) * trials + trial.
  std::vector<MatchResult> matches;
};

// Every ordered pairing, self-play included, for `trials` trials seeded
// base_seed + trial. The row agent takes the first seat in even trials and
// the second in odd ones.
TournamentRun run_tournament(const GameAnalysis& analysis, const std::vector<AgentSpec>& roster,
                             const TournamentOptions& options);

// Builds the table from match results grouped by (row, col) in roster order.
// Throws ContractViolation when a pairing has no matches or the round counts
// differ.
TournamentTable aggregate_matches(const std::string& game, const std::vector<std::string>& roster,
                                  const std::vector<MatchResult>& matches);

struct AgentSeries {
  std::string agent;
  std::vector<double> mean_payoff;  // rounds 1..horizon
};

// For each row agent, the round payoff averaged over all its matches.
// Throws ConfigError when horizon < 1 or a match is shorter than horizon.
std::vector<AgentSeries> timeseries_from_matches(const std::vector<std::string>& roster,
                                                 const std::vector<MatchResult>& matches,
                                                 int horizon);

std::vector<AgentSeries> timeseries_report(const GameAnalysis& analysis,
                                           const std::vector<AgentSpec>& roster, int horizon,
                                           int trials, std::uint64_t base_seed, int jobs = 0);

// CSV outputs. Numbers are printed with 6 significant digits.
//   tournament: row_agent,col_agent,trials,rounds,mean_payoff (col "Ave." for
//               row averages)
//   timeseries: agent,round,mean_payoff
void write_tournament_csv(const TournamentTable& table, const std::filesystem::path& path);
void write_timeseries_csv(const std::vector<AgentSeries>& series,
                          const std::filesystem::path& path);
std::string format_table(const TournamentTable& table);

// Raw per-round payoffs of one match, gzip-compressed CSV with exact
// (round-trip) numbers:
//   game,agent_a,agent_b,seed,seat_a,round,payoff_a,payoff_b
std::filesystem::path raw_match_filename(const MatchResult& match);
void write_raw_match(const MatchResult& match, const std::filesystem::path& path);
MatchResult read_raw_match(const std::filesystem::path& path);
// Every *.csv.gz under `dir`, sorted by file name.
std::vector<MatchResult> read_raw_dir(const std::filesystem::path& dir);

}  // namespace gabe
