#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "netrecon/error.hpp"
#include "netrecon/game.hpp"
#include "netrecon/spectral.hpp"
#include "support.hpp"

using namespace netrecon;
using testing_support::direct_dft;
using testing_support::direct_strength;
using testing_support::er_graph;

namespace {

std::vector<double> random_row(std::size_t T, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> x(T);
  for (double& v : x) v = rng.uniform() * 20.0 - 5.0;
  return x;
}

// Average ranks, ties sharing the mean rank.
std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j < idx.size() && v[idx[j]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k < j; ++k) r[idx[k]] = (i + j - 1) / 2.0;
    i = j;
  }
  return r;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = a.size();
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n, mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST(Dft, ConstantSignal) {
  std::vector<double> x(12, -2.5);
  const auto m = dft_magnitudes(x);
  EXPECT_NEAR(m[0], 30.0, 1e-12);
  for (std::size_t f = 1; f < 12; ++f) EXPECT_NEAR(m[f], 0.0, 1e-12);
}

TEST(Dft, PureToneLengthEight) {
  std::vector<double> x(8);
  for (std::size_t t = 0; t < 8; ++t) x[t] = std::cos(2 * std::numbers::pi * t / 8.0);
  const auto m = dft_magnitudes(x);
  for (std::size_t f = 0; f < 8; ++f) EXPECT_NEAR(m[f], (f == 1 || f == 7) ? 4.0 : 0.0, 1e-12) << f;
}

TEST(Dft, MatchesDirectSummation) {
  for (std::size_t T = 2; T <= 257; ++T) {
    const auto x = random_row(T, T);
    const auto m = dft_magnitudes(x);
    const auto ref = direct_dft(x);
    long double peak = 0;
    for (const auto& c : ref) peak = std::max(peak, std::abs(c));
    for (std::size_t f = 0; f < T; ++f) {
      ASSERT_LE(std::abs(m[f] - static_cast<double>(std::abs(ref[f]))), 1e-9 * static_cast<double>(peak))
          << "T=" << T << " f=" << f;
    }
  }
}

TEST(Dft, LargePrimeAndCompositeLengths) {
  for (std::size_t T : {997u, 1009u, 2000u, 4000u, 4001u}) {
    const auto x = random_row(T, T);
    EXPECT_NEAR(spectral_strength(x), direct_strength(x), 1e-9 * direct_strength(x)) << T;
  }
}

TEST(Dft, ConjugateSymmetry) {
  for (std::size_t T : {9u, 16u, 31u}) {
    const auto m = dft_magnitudes(random_row(T, 7));
    for (std::size_t f = 1; f < T; ++f) EXPECT_NEAR(m[f], m[T - f], 1e-9 * std::max(1.0, m[f]));
  }
}

TEST(Dft, RejectsTooShortInput) {
  std::vector<double> one{1.0};
  EXPECT_THROW(dft_magnitudes(one), ParameterError);
  EXPECT_THROW(spectral_strength(one), ParameterError);
}

TEST(Strength, FrequencySetIncludesNyquistOnce) {
  // Alternating signal puts all its energy in the Nyquist bin.
  std::vector<double> x{1, -1, 1, -1, 1, -1};
  EXPECT_NEAR(spectral_strength(x), 6.0 / 6.0, 1e-12);
  std::vector<double> odd{1, 2, 0, 4, 1};
  EXPECT_NEAR(spectral_strength(odd), direct_strength(odd), 1e-12);
}

TEST(Strength, ConstantRowIsZero) {
  std::vector<double> x(50, 7.0);
  EXPECT_NEAR(spectral_strength(x), 0.0, 1e-12);
}

TEST(Strength, Homogeneity) {
  const auto x = random_row(300, 3);
  for (double a : {0.0, 0.5, 3.0, 1e4}) {
    std::vector<double> y(x);
    for (double& v : y) v *= a;
    EXPECT_NEAR(spectral_strength(y), a * spectral_strength(x), 1e-12 * std::max(1.0, a * spectral_strength(x)));
  }
}

TEST(Strength, RowsYAndThreeYGiveOneToThree) {
  PayoffSeries s(2, 100);
  const auto y = random_row(100, 11);
  for (std::size_t t = 0; t < 100; ++t) {
    s.row(0)[t] = y[t];
    s.row(1)[t] = 3 * y[t];
  }
  const auto sv = strength(s);
  EXPECT_NEAR(sv.strength[1] / sv.strength[0], 3.0, 1e-12);
  EXPECT_EQ(sv.max_frequency, 50u);
}

TEST(Strength, SkipsHiddenAndSuppressedRows) {
  const auto g = er_graph(10, 0.4, 2);
  SimulationOptions o;
  o.suppressed = {2};
  auto s = hide_nodes(simulate(g, GameParams{}, o), std::vector<NodeId>{5});
  const auto sv = strength(s);
  EXPECT_EQ(sv.size(), 8u);
  EXPECT_EQ(std::count(sv.nodes.begin(), sv.nodes.end(), 2), 0);
  EXPECT_EQ(std::count(sv.nodes.begin(), sv.nodes.end(), 5), 0);
  std::vector<NodeId> all(10);
  std::iota(all.begin(), all.end(), 0);
  EXPECT_THROW(strength(hide_nodes(s, all)), InputError);
}

TEST(Strength, BurnInDropsLeadingSamples) {
  PayoffSeries s(1, 10);
  for (std::size_t t = 0; t < 10; ++t) s.row(0)[t] = static_cast<double>(t * t);
  StrengthOptions o;
  o.burn_in = 4;
  const auto sv = strength(s, o);
  std::vector<double> tail(s.row(0).begin() + 4, s.row(0).end());
  EXPECT_NEAR(sv.strength[0], direct_strength(tail), 1e-9);
  o.burn_in = 9;
  EXPECT_THROW(strength(s, o), ParameterError);
}

TEST(Strength, AllDefectRunIsProportionalToDegree) {
  const auto g = er_graph(20, 0.3, 5);
  SimulationOptions o;
  o.initial_strategies = std::vector<Strategy>(20, Strategy::Defect);
  GameParams p;
  p.rounds = 400;
  const auto sv = strength(simulate(g, p, o));
  for (std::size_t a = 0; a < sv.size(); ++a) {
    for (std::size_t b = 0; b < sv.size(); ++b) {
      const double ka = g.degree(sv.nodes[a]), kb = g.degree(sv.nodes[b]);
      if (ka == 0 || kb == 0) continue;
      EXPECT_NEAR(sv.strength[a] / sv.strength[b], ka / kb, 1e-9);
    }
  }
}

TEST(Strength, RankCorrelationWithDegree) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = er_graph(50, 0.1133, seed);
    GameParams p;
    p.rounds = 10000;
    p.seed = seed;
    // Converged dynamics: the first half of the run is discarded.
    StrengthOptions so;
    so.burn_in = p.rounds / 2;
    const auto sv = strength(simulate(g, p), so);
    std::vector<double> k;
    for (NodeId v : sv.nodes) k.push_back(static_cast<double>(g.degree(v)));
    EXPECT_GE(pearson(ranks(sv.strength), ranks(k)), 0.99) << "seed " << seed;
  }
}
