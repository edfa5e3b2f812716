#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "netrecon/graph.hpp"

namespace netrecon {

/// Confusion table over unordered node pairs.
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Counts every unordered pair of distinct nodes, skipping pairs that touch
/// an excluded node (hidden nodes). Throws InputError when the graphs have
/// different node counts.
ConfusionCounts confusion(const Graph& predicted, const Graph& truth, std::span<const NodeId> excluded = {});

/// SREL = TPR = tp / (tp + fn), SRNL = 1 - FPR = tn / (fp + tn). Either is
/// empty when its denominator is zero.
struct LinkRates {
  std::optional<double> srel;
  std::optional<double> srnl;
};

LinkRates srel_srnl(const ConfusionCounts& counts);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;

  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

struct RocCurve {
  std::vector<RocPoint> points;  // from (0,0) to (1,1)
  double auc = 0.0;
};

/// Sweeps a threshold from the highest score down. Pairs with equal scores
/// enter together as one step, so ties produce a diagonal segment. AUC is the
/// trapezoidal area under the points. `scores` is n x n row-major; only the
/// upper triangle is read. Throws InputError for non-finite scores among the
/// evaluated pairs, or when the evaluated pairs contain no edge or no
/// non-edge.
RocCurve roc(std::span<const double> scores, const Graph& truth, std::span<const NodeId> excluded = {});

/// |predicted ∩ truth| / |truth|; empty when `truth` is empty.
std::optional<double> accuracy_one(std::span<const NodeId> predicted, std::span<const NodeId> truth);

/// sum_i min(predicted_i, truth_i) / sum_i truth_i over per-node hidden-link
/// counts; empty when the true counts sum to zero. Throws InputError on a
/// length mismatch.
std::optional<double> accuracy_two(std::span<const std::size_t> predicted, std::span<const std::size_t> truth);

/// Number of hidden neighbors of every node (0 for hidden nodes themselves).
std::vector<std::size_t> hidden_link_counts(const Graph& graph, std::span<const NodeId> hidden);

/// Observable neighbors of a node, ascending.
std::vector<NodeId> observable_neighbors(const Graph& graph, NodeId node, std::span<const NodeId> hidden);

}  // namespace netrecon
