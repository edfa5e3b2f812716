#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "netrecon/graph.hpp"
#include "netrecon/rng.hpp"

namespace testing_support {

// Textbook O(T^2) DFT in long double; the reference the library is checked
// against.
inline std::vector<std::complex<long double>> direct_dft(std::span<const double> x) {
  const std::size_t T = x.size();
  std::vector<std::complex<long double>> X(T);
  for (std::size_t f = 0; f < T; ++f) {
    long double re = 0, im = 0;
    for (std::size_t t = 0; t < T; ++t) {
      // Reduce f*t mod T first so the angle stays exact for large products.
      const long double angle = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>((f * t) % T) / T;
      re += x[t] * std::cos(angle);
      im += x[t] * std::sin(angle);
    }
    X[f] = {re, im};
  }
  return X;
}

inline double direct_strength(std::span<const double> x) {
  const auto X = direct_dft(x);
  long double sum = 0;
  for (std::size_t f = 1; f <= x.size() / 2; ++f) sum += std::abs(X[f]);
  return static_cast<double>(sum / x.size());
}

inline netrecon::Graph er_graph(std::size_t n, double p, std::uint64_t seed) {
  netrecon::GraphModelSpec s;
  s.model = netrecon::GraphModel::ErdosRenyi;
  s.n = n;
  s.edge_probability = p;
  s.seed = seed;
  return netrecon::generate(s);
}

inline netrecon::Graph ba_graph(std::size_t n, std::size_t m, std::uint64_t seed) {
  netrecon::GraphModelSpec s;
  s.model = netrecon::GraphModel::BarabasiAlbert;
  s.n = n;
  s.attachment = m;
  s.seed = seed;
  return netrecon::generate(s);
}

inline netrecon::Graph path_graph(std::size_t n) {
  std::vector<netrecon::Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return netrecon::Graph(n, e);
}

inline netrecon::Graph cycle_graph(std::size_t n) {
  std::vector<netrecon::Edge> e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return netrecon::Graph(n, e);
}

inline netrecon::Graph star_graph(std::size_t n) {
  std::vector<netrecon::Edge> e;
  for (std::size_t i = 1; i < n; ++i) e.emplace_back(0, i);
  return netrecon::Graph(n, e);
}

inline bool connected(const netrecon::Graph& g) {
  if (g.node_count() == 0) return true;
  std::vector<int> seen(g.node_count(), 0);
  std::vector<netrecon::NodeId> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == g.node_count();
}

}  // namespace testing_support
