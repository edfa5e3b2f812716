#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "netrecon/baselines.hpp"
#include "netrecon/error.hpp"
#include "netrecon/rng.hpp"
#include "support.hpp"

using namespace netrecon;

namespace {

PayoffSeries from_rows(const std::vector<std::vector<double>>& rows) {
  PayoffSeries s(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy(rows[i].begin(), rows[i].end(), s.row(i).begin());
  }
  return s;
}

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform();
  return v;
}

// Plug-in entropy of a row after equal-width binning, in nats.
double binned_entropy(const std::vector<double>& x, std::size_t bins) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  std::map<std::size_t, double> counts;
  for (double v : x) {
    auto b = static_cast<std::size_t>((v - *lo) / (*hi - *lo) * bins);
    counts[std::min(b, bins - 1)] += 1;
  }
  double h = 0;
  for (auto& [b, c] : counts) h -= c / x.size() * std::log(c / x.size());
  return h;
}

void expect_symmetric(const ScoreMatrix& m) {
  for (std::size_t a = 0; a < m.node_count; ++a) {
    EXPECT_EQ(m.at(a, a), 0.0);
    for (std::size_t b = 0; b < m.node_count; ++b) {
      EXPECT_TRUE(std::isfinite(m.at(a, b)));
      EXPECT_GE(m.at(a, b), 0.0);
      EXPECT_EQ(m.at(a, b), m.at(b, a));
    }
  }
}

}  // namespace

TEST(Increments, InvertRunningSum) {
  auto s = from_rows({{0, 1, 3, 6, 10}, {2, 2, 2, 2, 2}});
  s.set_observable(1, false);
  const auto d = increments(s);
  EXPECT_EQ(std::vector<double>(d.row(0).begin(), d.row(0).end()), (std::vector<double>{0, 1, 2, 3, 4}));
  EXPECT_EQ(std::vector<double>(d.row(1).begin(), d.row(1).end()), (std::vector<double>{2, 0, 0, 0, 0}));
  EXPECT_FALSE(d.observable(1));
}

TEST(Correlation, SignIsIgnored) {
  const auto y = noise(200, 1);
  std::vector<double> neg, shifted;
  for (double v : y) {
    neg.push_back(-v);
    shifted.push_back(3 * v + 7);
  }
  const auto m = correlation_scores(from_rows({y, neg, shifted}));
  EXPECT_NEAR(m.at(0, 1), 1.0, 1e-12);
  EXPECT_NEAR(m.at(0, 2), 1.0, 1e-12);
  expect_symmetric(m);
  EXPECT_EQ(to_string(m.method), "CM");
}

TEST(Correlation, IndependentNoiseIsSmall) {
  const auto m = correlation_scores(from_rows({noise(10000, 2), noise(10000, 3)}));
  EXPECT_LT(m.at(0, 1), 0.05);
}

TEST(Correlation, ConstantRowAndShapeErrors) {
  const auto m = correlation_scores(from_rows({noise(50, 4), std::vector<double>(50, 1.0)}));
  EXPECT_EQ(m.at(0, 1), 0.0);
  EXPECT_THROW(correlation_scores(from_rows({noise(50, 4)})), InputError);
  EXPECT_THROW(correlation_scores(from_rows({{1, 2}, {3, 4}})), InputError);
}

TEST(Correlation, UnusableRowsScoreZero) {
  auto s = from_rows({noise(100, 5), noise(100, 5), noise(100, 5)});
  s.set_active(2, false);
  const auto m = correlation_scores(s);
  EXPECT_NEAR(m.at(0, 1), 1.0, 1e-12);
  EXPECT_EQ(m.at(0, 2), 0.0);
  EXPECT_EQ(m.nodes, (std::vector<NodeId>{0, 1}));
}

TEST(MutualInformation, IdenticalRowsGiveEntropy) {
  const auto y = noise(3000, 6);
  const auto m = mutual_information_scores(from_rows({y, y}), 16);
  EXPECT_NEAR(m.at(0, 1), binned_entropy(y, 16), 1e-9);
  EXPECT_EQ(to_string(m.method), "MI");
}

TEST(MutualInformation, MirrorImageGivesEntropy) {
  const auto y = noise(3000, 7);
  std::vector<double> mirror;
  for (double v : y) mirror.push_back(1 - v);
  const auto m = mutual_information_scores(from_rows({y, mirror}), 8);
  EXPECT_NEAR(m.at(0, 1), binned_entropy(y, 8), 1e-6);
}

TEST(MutualInformation, IndependentRowsNearPlugInBias) {
  // E[MI] for independent uniform rows is about (B-1)^2 / (2T).
  const std::size_t T = 10000, B = 16;
  const double bias = (B - 1.0) * (B - 1.0) / (2.0 * T);
  std::vector<std::vector<double>> rows;
  for (std::uint64_t s = 0; s < 8; ++s) rows.push_back(noise(T, 100 + s));
  const auto m = mutual_information_scores(from_rows(rows), B);
  double sum = 0;
  for (std::size_t a = 0; a < 8; ++a) {
    for (std::size_t b = a + 1; b < 8; ++b) sum += m.at(a, b);
  }
  const double mean = sum / 28;
  EXPECT_GT(mean, 0.5 * bias);
  EXPECT_LT(mean, 1.5 * bias);
  expect_symmetric(m);
}

TEST(MutualInformation, BinsValidated) {
  EXPECT_THROW(mutual_information_scores(from_rows({noise(20, 1), noise(20, 2)}), 1), ParameterError);
}

TEST(Granger, LaggedCopyScoresHigh) {
  const auto x = noise(2000, 8);
  const auto eps = noise(2000, 9);
  std::vector<double> y(2000, 0.0);
  for (std::size_t t = 1; t < y.size(); ++t) y[t] = x[t - 1] + 0.01 * eps[t];
  const auto m = granger_scores(from_rows({x, y, noise(2000, 10)}), 1);
  EXPECT_GT(m.at(0, 1), 2.0);
  EXPECT_LT(m.at(0, 2), 0.01);
  EXPECT_LT(m.at(1, 2), 0.01);
  expect_symmetric(m);
  EXPECT_EQ(to_string(m.method), "GC");
}

TEST(Granger, ConstantRowScoresZero) {
  const auto m = granger_scores(from_rows({noise(500, 11), std::vector<double>(500, 4.0)}), 2);
  EXPECT_EQ(m.at(0, 1), 0.0);
}

TEST(Granger, OrderValidated) {
  const auto s = from_rows({noise(30, 1), noise(30, 2)});
  EXPECT_THROW(granger_scores(s, 0), ParameterError);
  EXPECT_THROW(granger_scores(s, 3), ParameterError);
  EXPECT_NO_THROW(granger_scores(s, 2));
}

TEST(ScoreMatrix, CsvListsUpperTriangle) {
  const auto m = correlation_scores(from_rows({noise(20, 1), noise(20, 2), noise(20, 3)}));
  const auto csv = format_score_matrix(m);
  EXPECT_EQ(csv.rfind("i,j,score\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_NE(csv.find("\n0,1,"), std::string::npos);
  EXPECT_NE(csv.find("\n1,2,"), std::string::npos);
}
