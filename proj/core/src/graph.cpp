#include "netrecon/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "netrecon/error.hpp"
#include "netrecon/rng.hpp"

namespace netrecon {

Graph::Graph(std::size_t n, std::span<const Edge> edges) : adjacency_(n) {
  edges_.reserve(edges.size());
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n || static_cast<std::size_t>(b) >= n) {
      throw ParameterError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                           ") has an endpoint outside [0, " + std::to_string(n) + ")");
    }
    if (a == b) throw ParameterError("self-loop on node " + std::to_string(a));
    edges_.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (auto [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& row : adjacency_) std::sort(row.begin(), row.end());
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  const auto& row = adjacency_.at(a);
  return std::binary_search(row.begin(), row.end(), b);
}

double Graph::density() const noexcept {
  const double n = static_cast<double>(node_count());
  if (n < 2) return 0.0;
  return 2.0 * static_cast<double>(edge_count()) / (n * (n - 1.0));
}

double Graph::mean_degree() const noexcept {
  if (node_count() == 0) return 0.0;
  return 2.0 * static_cast<double>(edge_count()) / static_cast<double>(node_count());
}

void Graph::set_labels(std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != node_count()) {
    throw ParameterError("label table size does not match node count");
  }
  labels_ = std::move(labels);
}

std::vector<std::uint8_t> Graph::adjacency_matrix() const {
  const std::size_t n = node_count();
  std::vector<std::uint8_t> m(n * n, 0);
  for (auto [a, b] : edges_) {
    m[static_cast<std::size_t>(a) * n + b] = 1;
    m[static_cast<std::size_t>(b) * n + a] = 1;
  }
  return m;
}

std::vector<std::size_t> degree_sequence(const Graph& graph) {
  std::vector<std::size_t> k(graph.node_count());
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = graph.degree(static_cast<NodeId>(i));
  return k;
}

std::string to_string(GraphModel model) {
  switch (model) {
    case GraphModel::ErdosRenyi: return "ER";
    case GraphModel::BarabasiAlbert: return "BA";
    case GraphModel::WattsStrogatz: return "WS";
  }
  return "?";
}

GraphModel parse_graph_model(const std::string& text) {
  std::string upper = text;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "ER") return GraphModel::ErdosRenyi;
  if (upper == "BA") return GraphModel::BarabasiAlbert;
  if (upper == "WS") return GraphModel::WattsStrogatz;
  throw ParameterError("unknown graph model '" + text + "' (expected ER, BA or WS)");
}

void GraphModelSpec::validate() const {
  switch (model) {
    case GraphModel::ErdosRenyi:
      if (!(edge_probability >= 0.0 && edge_probability <= 1.0)) {
        throw ParameterError("ER edge probability must lie in [0, 1]");
      }
      break;
    case GraphModel::BarabasiAlbert:
      if (attachment < 1 || attachment >= n) {
        throw ParameterError("BA attachment count m must satisfy 1 <= m < n");
      }
      break;
    case GraphModel::WattsStrogatz:
      if (ring_degree % 2 != 0 || ring_degree >= n) {
        throw ParameterError("WS ring degree must be even and smaller than n");
      }
      if (!(rewire_probability >= 0.0 && rewire_probability <= 1.0)) {
        throw ParameterError("WS rewiring probability must lie in [0, 1]");
      }
      break;
  }
}

namespace {

Graph generate_er(const GraphModelSpec& spec, SplitMix64& rng) {
  std::vector<Edge> edges;
  const auto n = static_cast<NodeId>(spec.n);
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      if (rng.uniform() < spec.edge_probability) edges.emplace_back(a, b);
    }
  }
  return Graph(spec.n, edges);
}

Graph generate_ba(const GraphModelSpec& spec, SplitMix64& rng) {
  const auto m = static_cast<NodeId>(spec.attachment);
  const auto n = static_cast<NodeId>(spec.n);
  std::vector<Edge> edges;
  // Each edge contributes both endpoints, so sampling uniformly from this
  // list is sampling proportional to degree.
  std::vector<NodeId> endpoints;
  for (NodeId v = 0; v + 1 < m; ++v) {
    edges.emplace_back(v, v + 1);
    endpoints.push_back(v);
    endpoints.push_back(v + 1);
  }
  std::vector<NodeId> targets;
  for (NodeId v = m; v < n; ++v) {
    targets.clear();
    while (static_cast<NodeId>(targets.size()) < m) {
      NodeId pick = endpoints.empty() ? static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(v)))
                                      : endpoints[rng.below(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), pick) == targets.end()) targets.push_back(pick);
    }
    for (NodeId u : targets) {
      edges.emplace_back(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  return Graph(spec.n, edges);
}

Graph generate_ws(const GraphModelSpec& spec, SplitMix64& rng) {
  const auto n = static_cast<NodeId>(spec.n);
  const auto half = static_cast<NodeId>(spec.ring_degree / 2);
  std::vector<std::vector<std::uint8_t>> adj(spec.n, std::vector<std::uint8_t>(spec.n, 0));
  std::vector<std::size_t> deg(spec.n, 0);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId j = 1; j <= half; ++j) {
      NodeId v = (u + j) % n;
      adj[u][v] = adj[v][u] = 1;
      ++deg[u];
      ++deg[v];
    }
  }
  if (spec.rewire_probability > 0.0) {
    for (NodeId j = 1; j <= half; ++j) {
      for (NodeId u = 0; u < n; ++u) {
        NodeId v = (u + j) % n;
        if (rng.uniform() >= spec.rewire_probability) continue;
        if (deg[u] + 1 >= spec.n) continue;  // u already adjacent to everyone
        NodeId w;
        do {
          w = static_cast<NodeId>(rng.below(spec.n));
        } while (w == u || adj[u][w]);
        adj[u][v] = adj[v][u] = 0;
        --deg[v];
        adj[u][w] = adj[w][u] = 1;
        ++deg[w];
      }
    }
  }
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (adj[u][v]) edges.emplace_back(u, v);
    }
  }
  return Graph(spec.n, edges);
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

bool is_comment_or_blank(const std::string& line) {
  auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#' || line[pos] == '%';
}

// Recognizes "# nodes <n>" (also "#nodes: n"). Returns -1 when the line is
// an ordinary comment.
long long header_node_count(const std::string& line, std::size_t line_no) {
  std::string body = line.substr(line.find('#') + 1);
  std::replace(body.begin(), body.end(), ':', ' ');
  auto tokens = tokenize(body);
  if (tokens.size() != 2 || tokens[0] != "nodes") return -1;
  long long value = 0;
  auto [ptr, ec] = std::from_chars(tokens[1].data(), tokens[1].data() + tokens[1].size(), value);
  if (ec != std::errc{} || ptr != tokens[1].data() + tokens[1].size() || value < 0) {
    throw ParseError("invalid node-count header '" + line + "'", line_no);
  }
  return value;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open edge list '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

Graph generate(const GraphModelSpec& spec) {
  spec.validate();
  SplitMix64 rng(mix64(spec.seed));
  switch (spec.model) {
    case GraphModel::ErdosRenyi: return generate_er(spec, rng);
    case GraphModel::BarabasiAlbert: return generate_ba(spec, rng);
    case GraphModel::WattsStrogatz: return generate_ws(spec, rng);
  }
  throw ParameterError("unknown graph model");
}

Graph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  long long header_n = -1;
  long long max_index = -1;
  std::vector<Edge> edges;
  std::vector<std::size_t> edge_lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) {
      if (line.find('#') != std::string::npos) {
        long long h = header_node_count(line, line_no);
        if (h >= 0) header_n = h;
      }
      continue;
    }
    auto tokens = tokenize(line);
    if (tokens.size() != 2) {
      throw ParseError("expected two node indices, got '" + line + "'", line_no);
    }
    NodeId ends[2];
    for (int e = 0; e < 2; ++e) {
      const auto& tok = tokens[e];
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), ends[e]);
      if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ParseError("'" + tok + "' is not a node index", line_no);
      }
      if (ends[e] < 0) throw ParseError("negative node index " + tok, line_no);
    }
    if (ends[0] == ends[1]) throw ParseError("self-loop on node " + tokens[0], line_no);
    max_index = std::max<long long>(max_index, std::max(ends[0], ends[1]));
    edges.emplace_back(ends[0], ends[1]);
    edge_lines.push_back(line_no);
  }
  std::size_t n = static_cast<std::size_t>(max_index + 1);
  if (header_n >= 0) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (std::max(edges[e].first, edges[e].second) >= header_n) {
        throw ParseError("node index out of range for declared node count " +
                             std::to_string(header_n),
                         edge_lines[e]);
      }
    }
    n = static_cast<std::size_t>(header_n);
  }
  return Graph(n, edges);
}

Graph load_edge_list(const std::filesystem::path& path) { return parse_edge_list(read_file(path)); }

Graph parse_labeled_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::unordered_map<std::string, NodeId> index;
  std::vector<std::string> labels;
  std::vector<Edge> edges;
  auto lookup = [&](const std::string& label) {
    auto [it, inserted] = index.emplace(label, static_cast<NodeId>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    auto tokens = tokenize(line);
    if (tokens.size() < 2) throw ParseError("expected two node labels, got '" + line + "'", line_no);
    // Extra columns (weights, timestamps) are ignored.
    if (tokens[0] == tokens[1]) throw ParseError("self-loop on node " + tokens[0], line_no);
    NodeId a = lookup(tokens[0]);
    NodeId b = lookup(tokens[1]);
    edges.emplace_back(a, b);
  }
  Graph g(labels.size(), edges);
  g.set_labels(std::move(labels));
  return g;
}

Graph load_labeled_edge_list(const std::filesystem::path& path) {
  return parse_labeled_edge_list(read_file(path));
}

std::string format_edge_list(const Graph& graph) {
  std::ostringstream out;
  out << "# nodes " << graph.node_count() << '\n';
  for (auto [a, b] : graph.edges()) out << a << ' ' << b << '\n';
  return out.str();
}

void save_edge_list(const Graph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write edge list '" + path.string() + "'");
  out << format_edge_list(graph);
  if (!out) throw Error("failed writing edge list '" + path.string() + "'");
}

}  // namespace netrecon
