#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numeric>

#include "netrecon/error.hpp"
#include "netrecon/graph.hpp"
#include "support.hpp"

using namespace netrecon;
using testing_support::ba_graph;
using testing_support::er_graph;

TEST(Graph, MergesDuplicatesAndRejectsSelfLoops) {
  std::vector<Edge> e{{0, 1}, {1, 0}, {1, 2}};
  Graph g(3, e);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_TRUE(g.has_edge(1, 0));
  EXPECT_FALSE(g.has_edge(0, 2));

  std::vector<Edge> loop{{1, 1}};
  EXPECT_THROW(Graph(3, loop), ParameterError);
  std::vector<Edge> outside{{0, 3}};
  EXPECT_THROW(Graph(3, outside), ParameterError);
}

TEST(Graph, DegreeSequenceOfTriangle) {
  std::vector<Edge> e{{0, 1}, {1, 2}, {0, 2}};
  EXPECT_EQ(degree_sequence(Graph(3, e)), (std::vector<std::size_t>{2, 2, 2}));
}

TEST(Graph, DegreeSumIsTwiceEdgeCount) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = er_graph(40, 0.2, seed);
    const auto k = degree_sequence(g);
    EXPECT_EQ(std::accumulate(k.begin(), k.end(), std::size_t{0}), 2 * g.edge_count());
  }
}

TEST(Generate, ErdosRenyiDensityNearTarget) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EXPECT_NEAR(er_graph(100, 0.1133, seed).density(), 0.1133, 0.02) << "seed " << seed;
  }
}

TEST(Generate, ErdosRenyiZeroProbabilityIsEmpty) { EXPECT_EQ(er_graph(5, 0.0, 3).edge_count(), 0u); }

TEST(Generate, BarabasiAlbertTenNodesTwoAttachments) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto g = ba_graph(10, 2, seed);
    ASSERT_EQ(g.edge_count(), 17u);
    // Seed core is the edge 0-1; every later node links to exactly two
    // earlier nodes.
    EXPECT_TRUE(g.has_edge(0, 1));
    for (NodeId v = 2; v < 10; ++v) {
      int earlier = 0;
      for (NodeId w : g.neighbors(v)) earlier += w < v;
      EXPECT_EQ(earlier, 2) << "node " << v;
    }
  }
}

TEST(Generate, BarabasiAlbertEdgeCountFormula) {
  for (std::size_t m : {1, 3, 6}) {
    EXPECT_EQ(ba_graph(100, m, 11).edge_count(), (m - 1) + (100 - m) * m);
  }
}

TEST(Generate, WattsStrogatzKeepsEdgeCount) {
  GraphModelSpec s;
  s.model = GraphModel::WattsStrogatz;
  s.n = 60;
  s.ring_degree = 6;
  for (double p : {0.0, 0.1, 1.0}) {
    s.rewire_probability = p;
    s.seed = 4;
    const auto g = generate(s);
    EXPECT_EQ(g.edge_count(), 180u);
    if (p == 0.0) {
      for (NodeId v = 0; v < 60; ++v) EXPECT_EQ(g.degree(v), 6u);
    }
  }
}

TEST(Generate, SameSpecSameGraph) {
  EXPECT_EQ(er_graph(50, 0.1, 9), er_graph(50, 0.1, 9));
  EXPECT_EQ(ba_graph(50, 3, 9), ba_graph(50, 3, 9));
  EXPECT_FALSE(er_graph(50, 0.1, 9) == er_graph(50, 0.1, 10));
}

TEST(Generate, RejectsInvalidParameters) {
  GraphModelSpec s;
  s.n = 10;
  s.edge_probability = 1.5;
  EXPECT_THROW(generate(s), ParameterError);
  s.model = GraphModel::BarabasiAlbert;
  s.attachment = 10;
  EXPECT_THROW(generate(s), ParameterError);
  s.attachment = 0;
  EXPECT_THROW(generate(s), ParameterError);
  s.model = GraphModel::WattsStrogatz;
  s.ring_degree = 3;
  EXPECT_THROW(generate(s), ParameterError);
  s.ring_degree = 4;
  s.rewire_probability = -0.1;
  EXPECT_THROW(generate(s), ParameterError);
  EXPECT_THROW(parse_graph_model("SF"), ParameterError);
  EXPECT_EQ(parse_graph_model("ba"), GraphModel::BarabasiAlbert);
}

TEST(EdgeList, ParsesPlainPairs) {
  const auto g = parse_edge_list("0 1\n1 2");
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}, {1, 2}}));
}

TEST(EdgeList, EmptyInputIsEmptyGraph) {
  const auto g = parse_edge_list("");
  EXPECT_EQ(g.node_count(), 0u);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(EdgeList, CommentsAndHeader) {
  const auto g = parse_edge_list("# nodes 6\n% other comment\n\n0 1\n# note\n2 3\n");
  EXPECT_EQ(g.node_count(), 6u);
  EXPECT_EQ(g.edge_count(), 2u);
}

TEST(EdgeList, ErrorsCarryLineNumbers) {
  try {
    parse_edge_list("0 1\n1 x\n");
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  try {
    parse_edge_list("# nodes 3\n0 1\n2 5\n");
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_edge_list("1 1\n"), ParseError);
  EXPECT_THROW(parse_edge_list("0 1 2\n"), ParseError);
}

TEST(EdgeList, RoundTripThroughFile) {
  const auto path = std::filesystem::temp_directory_path() / "netrecon_roundtrip.txt";
  // 62 nodes and 159 edges, the size of the dolphin social network.
  std::vector<Edge> e;
  netrecon::SplitMix64 rng(5);
  while (e.size() < 159) {
    const auto a = static_cast<NodeId>(rng.below(62)), b = static_cast<NodeId>(rng.below(62));
    if (a == b) continue;
    Edge edge{std::min(a, b), std::max(a, b)};
    if (std::find(e.begin(), e.end(), edge) == e.end()) e.push_back(edge);
  }
  const Graph g(62, e);
  save_edge_list(g, path);
  const auto back = load_edge_list(path);
  EXPECT_EQ(back, g);
  EXPECT_EQ(back.node_count(), 62u);
  EXPECT_EQ(back.edge_count(), 159u);
  std::filesystem::remove(path);
}

TEST(EdgeList, HeaderKeepsIsolatedTrailingNodes) {
  std::vector<Edge> e{{0, 1}};
  const Graph g(5, e);
  EXPECT_EQ(parse_edge_list(format_edge_list(g)).node_count(), 5u);
}

TEST(EdgeList, LabeledEndpointsMapInOrderOfAppearance) {
  const auto g = parse_labeled_edge_list("Beak Fish\nFish Zap\n# c\nZap Beak\n");
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.labels(), (std::vector<std::string>{"Beak", "Fish", "Zap"}));
  EXPECT_TRUE(g.has_edge(0, 2));
}

TEST(EdgeList, MissingFileIsParseError) {
  EXPECT_THROW(load_edge_list("/nonexistent/netrecon.txt"), ParseError);
}
