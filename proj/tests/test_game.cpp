#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "netrecon/error.hpp"
#include "netrecon/game.hpp"
#include "support.hpp"

using namespace netrecon;
using testing_support::er_graph;

namespace {

constexpr Strategy C = Strategy::Cooperate;
constexpr Strategy D = Strategy::Defect;

GameParams per_round(std::size_t rounds, double kappa, std::uint64_t seed) {
  GameParams p;
  p.rounds = rounds;
  p.kappa = kappa;
  p.seed = seed;
  p.accumulate = false;
  return p;
}

}  // namespace

TEST(RoundPayoff, Examples) {
  PayoffMatrix pm;
  std::vector<Strategy> cd{C, D}, ccc{C, C, C};
  EXPECT_EQ(round_payoff(C, cd, pm), 3.0);
  EXPECT_EQ(round_payoff(D, {}, pm), 0.0);
  EXPECT_EQ(round_payoff(D, ccc, pm), 15.0);
}

TEST(Fermi, Examples) {
  EXPECT_DOUBLE_EQ(fermi_probability(4.0, 4.0, 1.0), 0.5);
  EXPECT_NEAR(fermi_probability(2.5, 1.5, 1.0), 1.0 / (1.0 + std::exp(1.0)), 1e-12);
  EXPECT_NEAR(fermi_probability(2.5, 1.5, 1.0), 0.26894, 1e-5);
  EXPECT_EQ(fermi_probability(1e6, 0.0, 1e-8), 0.0);
  EXPECT_EQ(fermi_probability(0.0, 1e6, 1e-8), 1.0);
}

TEST(Fermi, ComplementarySymmetry) {
  netrecon::SplitMix64 rng(1);
  for (int k = 0; k < 1000; ++k) {
    const double a = rng.uniform() * 100, b = rng.uniform() * 100;
    const double kappa = std::pow(10.0, -8 + 16 * rng.uniform());
    EXPECT_NEAR(fermi_probability(a, b, kappa) + fermi_probability(b, a, kappa), 1.0, 1e-12);
  }
}

TEST(Fermi, MonotoneInDifference) {
  double prev = 1.0;
  for (double d = -10; d <= 10; d += 0.5) {
    const double w = fermi_probability(d, 0.0, 2.0);
    EXPECT_LE(w, prev);
    prev = w;
  }
}

TEST(GameParams, Validation) {
  GameParams p;
  p.rounds = 1;
  EXPECT_THROW(p.validate(), ParameterError);
  p.rounds = 2;
  p.kappa = 0;
  EXPECT_THROW(p.validate(), ParameterError);
  p.kappa = 1;
  p.initial_cooperation = 1.5;
  EXPECT_THROW(p.validate(), ParameterError);
  Graph g(3, std::vector<Edge>{{0, 1}});
  GameParams short_run;
  short_run.rounds = 1;
  EXPECT_THROW(simulate(g, short_run), ParameterError);
}

TEST(Simulate, AllDefectOnTriangleEarnsTwoP) {
  std::vector<Edge> e{{0, 1}, {1, 2}, {0, 2}};
  Graph k3(3, e);
  SimulationOptions o;
  o.initial_strategies = std::vector<Strategy>{D, D, C};
  const auto s = simulate(k3, per_round(200, 1e-8, 3), o);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(s.at(i, 199), 2.0);
}

TEST(Simulate, AllDefectIsAbsorbing) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = er_graph(10, 0.4, seed);
    SimulationOptions o;
    o.initial_strategies = std::vector<Strategy>(10, D);
    const auto s = simulate(g, per_round(50, 1e-8, seed), o);
    for (NodeId i = 0; i < 10; ++i) {
      for (std::size_t t = 1; t < 50; ++t) EXPECT_EQ(s.at(i, t), static_cast<double>(g.degree(i)));
    }
  }
}

TEST(Simulate, ColumnZeroIsTheZeroInitialPayoff) {
  const auto g = er_graph(12, 0.3, 2);
  GameParams p;
  p.rounds = 20;
  const auto s = simulate(g, p);
  for (std::size_t i = 0; i < 12; ++i) EXPECT_EQ(s.at(i, 0), 0.0);
}

TEST(Simulate, CumulativeSeriesIsRunningSumOfRoundPayoffs) {
  const auto g = er_graph(30, 0.2, 8);
  GameParams cum;
  cum.rounds = 300;
  cum.seed = 17;
  GameParams inc = cum;
  inc.accumulate = false;
  const auto a = simulate(g, cum), b = simulate(g, inc);
  for (std::size_t i = 0; i < 30; ++i) {
    double run = 0;
    for (std::size_t t = 0; t < 300; ++t) {
      run += b.at(i, t);
      EXPECT_EQ(a.at(i, t), run);
    }
  }
}

TEST(Simulate, IsolatedNodeEarnsNothing) {
  Graph g(1, std::vector<Edge>{});
  const auto s = simulate(g, GameParams{});
  for (double v : s.values()) EXPECT_EQ(v, 0.0);
}

TEST(Simulate, SuppressedRowIsZeroAndInactive) {
  const auto g = er_graph(20, 0.3, 1);
  SimulationOptions o;
  o.suppressed = {4};
  const auto s = simulate(g, per_round(100, 1e8, 5), o);
  for (double v : s.row(4)) EXPECT_EQ(v, 0.0);
  EXPECT_FALSE(s.active(4));
  const auto usable = s.usable_nodes();
  EXPECT_EQ(std::count(usable.begin(), usable.end(), 4), 0);
  o.suppressed = {20};
  EXPECT_THROW(simulate(g, per_round(10, 1, 1), o), ParameterError);
}

TEST(Simulate, SuppressionLowersNeighborsByExactlyP) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = er_graph(8 + seed % 3, 0.4, seed);
    const std::size_t n = g.node_count();
    SimulationOptions all_d;
    all_d.initial_strategies = std::vector<Strategy>(n, D);
    const auto base = simulate(g, per_round(30, 1e-8, seed), all_d);
    for (NodeId i = 0; i < static_cast<NodeId>(n); ++i) {
      auto o = all_d;
      o.suppressed = {i};
      const auto cut = simulate(g, per_round(30, 1e-8, seed), o);
      for (NodeId j = 0; j < static_cast<NodeId>(n); ++j) {
        if (j == i) continue;
        const double drop = base.at(j, 29) - cut.at(j, 29);
        EXPECT_EQ(drop, g.has_edge(i, j) ? 1.0 : 0.0) << "i=" << i << " j=" << j;
      }
    }
  }
}

TEST(Simulate, DeterministicForFixedSeed) {
  const auto g = er_graph(40, 0.15, 3);
  for (auto sched : {UpdateSchedule::Synchronous, UpdateSchedule::Asynchronous}) {
    GameParams p;
    p.rounds = 400;
    p.seed = 99;
    p.schedule = sched;
    EXPECT_EQ(simulate(g, p), simulate(g, p));
    GameParams q = p;
    q.seed = 100;
    EXPECT_FALSE(simulate(g, p) == simulate(g, q));
  }
}

TEST(Simulate, PayoffsNonNegative) {
  const auto g = er_graph(30, 0.2, 12);
  for (double kappa : {1e-8, 1.0, 1e8}) {
    const auto s = simulate(g, per_round(200, kappa, 4));
    for (double v : s.values()) EXPECT_GE(v, 0.0);
  }
}

TEST(Simulate, InitialStrategiesFollowCooperationProbability) {
  GameParams p;
  p.initial_cooperation = 0.0;
  for (auto s : initial_strategies(50, p)) EXPECT_EQ(s, D);
  p.initial_cooperation = 1.0;
  for (auto s : initial_strategies(50, p)) EXPECT_EQ(s, C);
  p.initial_cooperation = 0.5;
  const auto mixed = initial_strategies(2000, p);
  const auto coop = std::count(mixed.begin(), mixed.end(), C);
  EXPECT_NEAR(coop / 2000.0, 0.5, 0.05);
}

TEST(HideNodes, Examples) {
  const auto g = er_graph(20, 0.3, 6);
  const auto s = simulate(g, GameParams{});
  EXPECT_EQ(hide_nodes(s, {}), s);
  std::vector<NodeId> h{19};
  const auto hidden = hide_nodes(s, h);
  EXPECT_EQ(hidden.observable_nodes().size(), 19u);
  EXPECT_FALSE(hidden.observable(19));
  for (double v : hidden.row(19)) EXPECT_EQ(v, 0.0);
  std::vector<NodeId> all(20);
  std::iota(all.begin(), all.end(), 0);
  EXPECT_TRUE(hide_nodes(s, all).usable_nodes().empty());
}

TEST(PayoffSeriesCsv, RoundTripIsExact) {
  const auto g = er_graph(15, 0.3, 2);
  GameParams p;
  p.rounds = 64;
  p.payoff.r = 3.1;  // non-integer values exercise the float formatting
  SimulationOptions o;
  o.suppressed = {3};
  const auto s = hide_nodes(simulate(g, p, o), std::vector<NodeId>{7});
  const auto back = parse_payoff_series(format_payoff_series(s));
  EXPECT_EQ(back, s);
  EXPECT_THROW(parse_payoff_series("garbage"), ParseError);
}
