#include <benchmark/benchmark.h>

#include "netrecon/baselines.hpp"
#include "netrecon/game.hpp"
#include "netrecon/graph.hpp"
#include "netrecon/inference.hpp"

namespace {

netrecon::Graph er(std::size_t n) {
  netrecon::GraphModelSpec spec;
  spec.n = n;
  spec.edge_probability = 11.2 / static_cast<double>(n - 1);
  spec.seed = 1;
  return netrecon::generate(spec);
}

netrecon::GameParams params(std::size_t n) {
  netrecon::GameParams p;
  p.rounds = 20 * n;
  p.seed = 2;
  return p;
}

void BM_Simulate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = er(n);
  const auto p = params(n);
  for (auto _ : state) benchmark::DoNotOptimize(netrecon::simulate(g, p));
}
BENCHMARK(BM_Simulate)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_Strength(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto series = netrecon::simulate(er(n), params(n));
  for (auto _ : state) benchmark::DoNotOptimize(netrecon::strength(series));
}
BENCHMARK(BM_Strength)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_Reconstruct(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = er(n);
  netrecon::ReconstructOptions o;
  o.strength.burn_in = 10 * n;
  for (auto _ : state) {
    netrecon::SimulationSource src(g, params(n));
    benchmark::DoNotOptimize(netrecon::reconstruct(src, o));
  }
}
BENCHMARK(BM_Reconstruct)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Granger(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto series = netrecon::increments(netrecon::simulate(er(n), params(n)));
  for (auto _ : state) benchmark::DoNotOptimize(netrecon::granger_scores(series));
}
BENCHMARK(BM_Granger)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
