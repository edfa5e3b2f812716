#include "netrecon/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "netrecon/error.hpp"

namespace netrecon {

namespace {

std::vector<std::uint8_t> membership(std::size_t n, std::span<const NodeId> nodes) {
  std::vector<std::uint8_t> in(n, 0);
  for (NodeId v : nodes) {
    if (v < 0 || static_cast<std::size_t>(v) >= n) throw InputError("node " + std::to_string(v) + " out of range");
    in[v] = 1;
  }
  return in;
}

}  // namespace

ConfusionCounts confusion(const Graph& predicted, const Graph& truth, std::span<const NodeId> excluded) {
  const std::size_t n = truth.node_count();
  if (predicted.node_count() != n) throw InputError("predicted and true graphs have different node counts");
  const auto skip = membership(n, excluded);
  const auto P = predicted.adjacency_matrix();
  const auto G = truth.adjacency_matrix();
  ConfusionCounts c;
  for (std::size_t a = 0; a < n; ++a) {
    if (skip[a]) continue;
    for (std::size_t b = a + 1; b < n; ++b) {
      if (skip[b]) continue;
      const bool p = P[a * n + b], g = G[a * n + b];
      if (p && g) ++c.tp;
      else if (p) ++c.fp;
      else if (g) ++c.fn;
      else ++c.tn;
    }
  }
  return c;
}

LinkRates srel_srnl(const ConfusionCounts& c) {
  LinkRates r;
  if (c.tp + c.fn > 0) r.srel = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  if (c.fp + c.tn > 0) r.srnl = static_cast<double>(c.tn) / static_cast<double>(c.fp + c.tn);
  return r;
}

RocCurve roc(std::span<const double> scores, const Graph& truth, std::span<const NodeId> excluded) {
  const std::size_t n = truth.node_count();
  if (scores.size() != n * n) throw InputError("score matrix does not match the graph size");
  const auto skip = membership(n, excluded);
  const auto G = truth.adjacency_matrix();

  struct Pair {
    double score;
    bool edge;
  };
  std::vector<Pair> pairs;
  std::size_t positives = 0;
  for (std::size_t a = 0; a < n; ++a) {
    if (skip[a]) continue;
    for (std::size_t b = a + 1; b < n; ++b) {
      if (skip[b]) continue;
      const double s = scores[a * n + b];
      if (!std::isfinite(s)) throw InputError("non-finite score for pair " + std::to_string(a) + "," + std::to_string(b));
      pairs.push_back({s, G[a * n + b] != 0});
      positives += G[a * n + b];
    }
  }
  const std::size_t negatives = pairs.size() - positives;
  if (positives == 0 || negatives == 0) throw InputError("ROC needs at least one edge and one non-edge");
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.score > y.score; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t k = 0; k < pairs.size();) {
    std::size_t e = k;
    while (e < pairs.size() && pairs[e].score == pairs[k].score) {
      if (pairs[e].edge) ++tp;
      else ++fp;
      ++e;
    }
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                            static_cast<double>(tp) / static_cast<double>(positives)});
    k = e;
  }
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    const auto& p = curve.points[k - 1];
    const auto& q = curve.points[k];
    curve.auc += (q.fpr - p.fpr) * (q.tpr + p.tpr) / 2.0;
  }
  return curve;
}

std::optional<double> accuracy_one(std::span<const NodeId> predicted, std::span<const NodeId> truth) {
  if (truth.empty()) return std::nullopt;
  std::size_t hit = 0;
  for (NodeId v : truth) {
    if (std::find(predicted.begin(), predicted.end(), v) != predicted.end()) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(truth.size());
}

std::optional<double> accuracy_two(std::span<const std::size_t> predicted, std::span<const std::size_t> truth) {
  if (predicted.size() != truth.size()) throw InputError("hidden-link vectors differ in length");
  std::size_t matched = 0, total = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    matched += std::min(predicted[i], truth[i]);
    total += truth[i];
  }
  if (total == 0) return std::nullopt;
  return static_cast<double>(matched) / static_cast<double>(total);
}

std::vector<std::size_t> hidden_link_counts(const Graph& graph, std::span<const NodeId> hidden) {
  const auto is_hidden = membership(graph.node_count(), hidden);
  std::vector<std::size_t> out(graph.node_count(), 0);
  for (const auto& [a, b] : graph.edges()) {
    if (is_hidden[a] && !is_hidden[b]) ++out[b];
    if (is_hidden[b] && !is_hidden[a]) ++out[a];
  }
  return out;
}

std::vector<NodeId> observable_neighbors(const Graph& graph, NodeId node, std::span<const NodeId> hidden) {
  const auto is_hidden = membership(graph.node_count(), hidden);
  std::vector<NodeId> out;
  for (NodeId v : graph.neighbors(node)) {
    if (!is_hidden[v]) out.push_back(v);
  }
  return out;
}

}  // namespace netrecon
