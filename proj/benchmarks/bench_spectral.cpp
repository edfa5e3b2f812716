#include <benchmark/benchmark.h>

#include <vector>

#include "netrecon/rng.hpp"
#include "netrecon/spectral.hpp"

namespace {

std::vector<double> signal(std::size_t n) {
  netrecon::SplitMix64 rng(n);
  std::vector<double> x(n);
  for (double& v : x) v = rng.uniform();
  return x;
}

void BM_SpectralStrength(benchmark::State& state) {
  const auto x = signal(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(netrecon::spectral_strength(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
// Powers of two, a prime and the T = 20N lengths used in experiments.
BENCHMARK(BM_SpectralStrength)->Arg(1024)->Arg(1009)->Arg(2000)->Arg(4000)->Arg(10000)->Arg(65536);

}  // namespace
