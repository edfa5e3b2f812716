#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace netrecon {

using NodeId = std::int32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Undirected simple graph over nodes 0..n-1.
///
/// Immutable after construction. Edges are stored normalized (first < second)
/// and sorted; neighbor lists are sorted ascending.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from an edge list. Duplicate edges (in either
  /// orientation) are merged. Throws ParameterError on self-loops or
  /// endpoints outside [0, n).
  Graph(std::size_t n, std::span<const Edge> edges);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::span<const NodeId> neighbors(NodeId node) const { return adjacency_.at(node); }
  std::size_t degree(NodeId node) const { return adjacency_.at(node).size(); }
  bool has_edge(NodeId a, NodeId b) const;

  /// Edge density 2|E| / (n(n-1)); zero for n < 2.
  double density() const noexcept;
  double mean_degree() const noexcept;

  /// Optional external labels for nodes loaded from labeled edge lists.
  /// Empty when nodes carry no external names.
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  void set_labels(std::vector<std::string> labels);

  /// Dense row-major 0/1 adjacency.
  std::vector<std::uint8_t> adjacency_matrix() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.node_count() == b.node_count() && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
};

std::vector<std::size_t> degree_sequence(const Graph& graph);

enum class GraphModel { ErdosRenyi, BarabasiAlbert, WattsStrogatz };

std::string to_string(GraphModel model);
/// Accepts "ER", "BA", "WS" (case-insensitive). Throws ParameterError.
GraphModel parse_graph_model(const std::string& text);

struct GraphModelSpec {
  GraphModel model = GraphModel::ErdosRenyi;
  std::size_t n = 0;
  double edge_probability = 0.0;  // ER
  std::size_t attachment = 1;     // BA: edges added per new node (m)
  std::size_t ring_degree = 2;    // WS: even lattice degree
  double rewire_probability = 0.0;  // WS
  std::uint64_t seed = 0;

  /// Throws ParameterError if the model parameters are out of range.
  void validate() const;
};

/// Draws a graph from the model. Same spec (seed included) gives the same graph.
///
/// ER: each of the n(n-1)/2 pairs is kept independently with the given
/// probability.
/// BA: the first m nodes form a path; every later node attaches to m distinct
/// existing nodes chosen with probability proportional to degree. The result
/// has (m-1) + (n-m)m edges.
/// WS: ring lattice where each node links to ring_degree/2 successors, then
/// each lattice edge (u, v) is rewired to (u, w) with probability p, w drawn
/// uniformly among nodes that are neither u nor already adjacent to u.
Graph generate(const GraphModelSpec& spec);

/// Reads a whitespace-separated integer edge list. Lines that are blank or
/// start with '#' are skipped, except a header `# nodes <n>` which fixes the
/// node count. Without a header, n = 1 + max index (0 for an empty file).
/// Throws ParseError with the line number on malformed input.
Graph load_edge_list(const std::filesystem::path& path);
Graph parse_edge_list(const std::string& text);

/// Reads an edge list whose endpoints are arbitrary tokens. Labels are mapped
/// to 0-based indices in order of first appearance and kept in Graph::labels().
Graph load_labeled_edge_list(const std::filesystem::path& path);
Graph parse_labeled_edge_list(const std::string& text);

/// Writes `# nodes <n>` followed by one "u v" line per edge.
void save_edge_list(const Graph& graph, const std::filesystem::path& path);
std::string format_edge_list(const Graph& graph);

}  // namespace netrecon
