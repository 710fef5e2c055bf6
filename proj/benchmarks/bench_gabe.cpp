#include <benchmark/benchmark.h>

#include <random>

#include "gabe/analysis.hpp"
#include "gabe/bandit.hpp"
#include "gabe/cfr.hpp"
#include "gabe/games/blocks.hpp"
#include "gabe/games/microgrid.hpp"
#include "gabe/harness.hpp"
#include "gabe/opponents.hpp"
#include "gabe/planning.hpp"

namespace {

using namespace gabe;

const TabularGame& microgrid() {
  static const TabularGame g =
      enumerate_states(games::MicrogridGame(games::MicrogridConfig::defaults()));
  return g;
}

const TabularGame& blocks() {
  static const TabularGame g = enumerate_states(games::BlockGame(games::BlockConfig::defaults()));
  return g;
}

void BM_EnumerateMicrogrid(benchmark::State& state) {
  const games::MicrogridGame game(games::MicrogridConfig::defaults());
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_states(game).num_states());
}
BENCHMARK(BM_EnumerateMicrogrid)->Unit(benchmark::kMillisecond);

void BM_EnumerateBlocks(benchmark::State& state) {
  const games::BlockGame game(games::BlockConfig::defaults());
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_states(game).num_states());
}
BENCHMARK(BM_EnumerateBlocks)->Unit(benchmark::kMillisecond);

void BM_JointMdpMicrogrid(benchmark::State& state) {
  const auto& g = microgrid();
  for (auto _ : state) benchmark::DoNotOptimize(solve_joint_mdp(g, 0.5).v_first[g.start()]);
}
BENCHMARK(BM_JointMdpMicrogrid)->Unit(benchmark::kMillisecond);

void BM_EnumerateTargetsBlocks(benchmark::State& state) {
  const auto& g = blocks();
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_targets(g, default_omega_grid()).size());
}
BENCHMARK(BM_EnumerateTargetsBlocks)->Unit(benchmark::kMillisecond);

void BM_SecurityBlocks(benchmark::State& state) {
  const auto& g = blocks();
  for (auto _ : state) benchmark::DoNotOptimize(solve_zero_sum(g, Seat::first).security_value);
}
BENCHMARK(BM_SecurityBlocks)->Unit(benchmark::kMillisecond);

void BM_MatrixGame(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<std::vector<double>> m(n, std::vector<double>(n));
  for (auto& row : m) {
    for (double& x : row) x = unit(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(matrix_game_solve(m).value);
}
BENCHMARK(BM_MatrixGame)->Arg(2)->Arg(4)->Arg(8);

void BM_CfrIterationBlocks(benchmark::State& state) {
  const auto& g = blocks();
  CfrState cfr(g);
  for (auto _ : state) cfr.iterate(g);
}
BENCHMARK(BM_CfrIterationBlocks)->Unit(benchmark::kMicrosecond);

void BM_Exp3Round(benchmark::State& state) {
  Exp3 e(static_cast<int>(state.range(0)));
  Rng rng(3);
  int t = 0;
  for (auto _ : state) {
    const int arm = e.select(++t, rng);
    e.update(arm, 0.5);
  }
}
BENCHMARK(BM_Exp3Round)->Arg(9)->Arg(13);

void BM_MatchGabeVsFolkEgal(benchmark::State& state) {
  const auto analysis = GameAnalysis::build(games::BlockGame(games::BlockConfig::defaults()));
  const auto a = parse_agent_spec("gabe-exp3");
  const auto b = parse_agent_spec("folkegal");
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_match(*analysis, a, b, 365, seed++).mean_a());
}
BENCHMARK(BM_MatchGabeVsFolkEgal)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
