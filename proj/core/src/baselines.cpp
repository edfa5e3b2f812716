#include "netrecon/baselines.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <limits>
#include <cmath>
#include <numeric>

#include "netrecon/error.hpp"

namespace netrecon {

std::string to_string(ScoreMethod method) {
  switch (method) {
    case ScoreMethod::Dft: return "DFT";
    case ScoreMethod::Correlation: return "CM";
    case ScoreMethod::MutualInformation: return "MI";
    case ScoreMethod::Granger: return "GC";
  }
  return "?";
}

PayoffSeries increments(const PayoffSeries& series) {
  PayoffSeries out = series;
  for (std::size_t i = 0; i < series.node_count(); ++i) {
    auto src = series.row(i);
    auto dst = out.row(i);
    for (std::size_t t = 1; t < src.size(); ++t) dst[t] = src[t] - src[t - 1];
  }
  return out;
}

namespace {

ScoreMatrix empty_matrix(ScoreMethod method, const PayoffSeries& series) {
  ScoreMatrix m;
  m.method = method;
  m.node_count = series.node_count();
  m.nodes = series.usable_nodes();
  m.scores.assign(m.node_count * m.node_count, 0.0);
  if (m.nodes.size() < 2) throw InputError("pairwise scores need at least 2 usable rows");
  return m;
}

void set_pair(ScoreMatrix& m, NodeId a, NodeId b, double value) {
  m.scores[static_cast<std::size_t>(a) * m.node_count + b] = value;
  m.scores[static_cast<std::size_t>(b) * m.node_count + a] = value;
}

// Row shifted to zero mean and scaled to unit variance; empty if constant.
std::vector<double> standardized(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / n);
  if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) return {};
  std::vector<double> z(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) z[t] = (x[t] - mean) / sd;
  return z;
}

// Residual sum of squares of y(t) on [1, y lags, x lags] for t >= order.
// `x` may be null for the restricted model. Returns NaN when singular.
double lagged_rss(const std::vector<double>& y, const std::vector<double>* x, std::size_t order) {
  const auto p = static_cast<Eigen::Index>(1 + order * (x ? 2 : 1));
  const std::size_t T = y.size();
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(p), z(p);
  auto fill = [&](std::size_t t) {
    z[0] = 1.0;
    for (std::size_t l = 1; l <= order; ++l) {
      z[static_cast<Eigen::Index>(l)] = y[t - l];
      if (x) z[static_cast<Eigen::Index>(order + l)] = (*x)[t - l];
    }
  };
  for (std::size_t t = order; t < T; ++t) {
    fill(t);
    G.selfadjointView<Eigen::Lower>().rankUpdate(z);
    b += z * y[t];
  }
  const Eigen::LDLT<Eigen::MatrixXd, Eigen::Lower> ldlt(G);
  if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-12)) return std::numeric_limits<double>::quiet_NaN();
  const Eigen::VectorXd beta = ldlt.solve(b);
  double rss = 0.0;
  for (std::size_t t = order; t < T; ++t) {
    fill(t);
    const double r = y[t] - z.dot(beta);
    rss += r * r;
  }
  return rss;
}

}  // namespace

ScoreMatrix correlation_scores(const PayoffSeries& series) {
  auto m = empty_matrix(ScoreMethod::Correlation, series);
  if (series.rounds() < 3) throw InputError("correlation needs at least 3 samples");
  std::vector<std::vector<double>> z;
  for (NodeId v : m.nodes) z.push_back(standardized(series.row(v)));
  const double T = static_cast<double>(series.rounds());
  for (std::size_t a = 0; a < m.nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < m.nodes.size(); ++b) {
      if (z[a].empty() || z[b].empty()) continue;
      const double r = std::inner_product(z[a].begin(), z[a].end(), z[b].begin(), 0.0) / T;
      set_pair(m, m.nodes[a], m.nodes[b], std::min(1.0, std::abs(r)));
    }
  }
  return m;
}

ScoreMatrix mutual_information_scores(const PayoffSeries& series, std::size_t bins) {
  if (bins < 2) throw ParameterError("mutual information needs at least 2 bins");
  auto m = empty_matrix(ScoreMethod::MutualInformation, series);
  const std::size_t T = series.rounds();
  std::vector<std::vector<std::uint16_t>> code;
  for (NodeId v : m.nodes) {
    const auto row = series.row(v);
    const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    const double width = (*hi - *lo) / static_cast<double>(bins);
    std::vector<std::uint16_t> c(T, 0);
    if (width > 0.0) {
      for (std::size_t t = 0; t < T; ++t) {
        c[t] = static_cast<std::uint16_t>(std::min<double>(static_cast<double>(bins - 1), std::floor((row[t] - *lo) / width)));
      }
    }
    code.push_back(std::move(c));
  }
  std::vector<double> joint(bins * bins), pa(bins), pb(bins);
  const double inv = 1.0 / static_cast<double>(T);
  for (std::size_t a = 0; a < m.nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < m.nodes.size(); ++b) {
      std::fill(joint.begin(), joint.end(), 0.0);
      std::fill(pa.begin(), pa.end(), 0.0);
      std::fill(pb.begin(), pb.end(), 0.0);
      for (std::size_t t = 0; t < T; ++t) {
        joint[code[a][t] * bins + code[b][t]] += inv;
        pa[code[a][t]] += inv;
        pb[code[b][t]] += inv;
      }
      double mi = 0.0;
      for (std::size_t x = 0; x < bins; ++x) {
        for (std::size_t y = 0; y < bins; ++y) {
          const double pxy = joint[x * bins + y];
          if (pxy > 0.0) mi += pxy * std::log(pxy / (pa[x] * pb[y]));
        }
      }
      set_pair(m, m.nodes[a], m.nodes[b], std::max(0.0, mi));
    }
  }
  return m;
}

ScoreMatrix granger_scores(const PayoffSeries& series, std::size_t order) {
  if (order < 1) throw ParameterError("Granger order must be at least 1");
  if (series.rounds() <= 10 * order) throw ParameterError("Granger scores need T > 10 * order");
  auto m = empty_matrix(ScoreMethod::Granger, series);
  const std::size_t k = m.nodes.size();
  std::vector<std::vector<double>> z;
  for (NodeId v : m.nodes) z.push_back(standardized(series.row(v)));

  std::vector<double> restricted(k, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t j = 0; j < k; ++j) {
    if (!z[j].empty()) restricted[j] = lagged_rss(z[j], nullptr, order);
  }
  std::size_t singular = 0;
  std::vector<double> directed(k * k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    // A constant target has nothing to predict.
    if (z[j].empty()) continue;
    for (std::size_t i = 0; i < k; ++i) {
      if (i == j || z[i].empty()) continue;
      const double full = lagged_rss(z[j], &z[i], order);
      if (std::isnan(full) || std::isnan(restricted[j])) {
        ++singular;
        continue;
      }
      if (!(restricted[j] > 0.0)) continue;
      const double score = std::log(restricted[j] / std::max(full, restricted[j] * 1e-12));
      directed[i * k + j] = std::max(0.0, score);
    }
  }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      set_pair(m, m.nodes[a], m.nodes[b], std::max(directed[a * k + b], directed[b * k + a]));
    }
  }
  if (singular > 0) {
    m.warnings.push_back(std::to_string(singular) + " singular Granger regressions scored 0");
  }
  return m;
}

std::string format_score_matrix(const ScoreMatrix& matrix) {
  std::string out = "i,j,score\n";
  char buf[64];
  for (std::size_t a = 0; a < matrix.nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < matrix.nodes.size(); ++b) {
      const NodeId i = matrix.nodes[a], j = matrix.nodes[b];
      auto res = std::to_chars(buf, buf + sizeof buf, matrix.at(i, j));
      out += std::to_string(i) + ',' + std::to_string(j) + ',' + std::string(buf, res.ptr) + '\n';
    }
  }
  return out;
}

}  // namespace netrecon
