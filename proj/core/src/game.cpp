#include "netrecon/game.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "netrecon/error.hpp"
#include "netrecon/rng.hpp"

namespace netrecon {

void GameParams::validate() const {
  if (rounds < 2) throw ParameterError("game rounds T must be at least 2");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ParameterError("kappa must be a positive finite number");
  if (!(initial_cooperation >= 0.0 && initial_cooperation <= 1.0)) {
    throw ParameterError("initial cooperation probability must lie in [0, 1]");
  }
}

PayoffSeries::PayoffSeries(std::size_t nodes, std::size_t rounds)
    : nodes_(nodes), rounds_(rounds), values_(nodes * rounds, 0.0), active_(nodes, 1),
      observable_(nodes, 1) {}

std::vector<NodeId> PayoffSeries::usable_nodes() const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < nodes_; ++i) {
    if (active_[i] && observable_[i]) out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

std::vector<NodeId> PayoffSeries::observable_nodes() const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < nodes_; ++i) {
    if (observable_[i]) out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

double round_payoff(Strategy self, std::span<const Strategy> neighbors, const PayoffMatrix& payoff) {
  double total = 0.0;
  for (Strategy other : neighbors) total += payoff(self, other);
  return total;
}

double fermi_probability(double own, double other, double kappa) {
  constexpr double kClamp = 700.0;
  const double arg = (own - other) / kappa;
  if (arg > kClamp) return 0.0;
  if (arg < -kClamp) return 1.0;
  return 1.0 / (1.0 + std::exp(arg));
}

std::vector<Strategy> initial_strategies(std::size_t nodes, const GameParams& params) {
  std::vector<Strategy> s(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double u = unit_double(counter_random(params.seed, ~std::uint64_t{0}, i, 2));
    s[i] = u < params.initial_cooperation ? Strategy::Cooperate : Strategy::Defect;
  }
  return s;
}

namespace {

// Neighbor lists restricted to active nodes, compressed.
struct ActiveAdjacency {
  std::vector<std::size_t> offsets;
  std::vector<NodeId> targets;

  std::span<const NodeId> of(std::size_t i) const {
    return {targets.data() + offsets[i], offsets[i + 1] - offsets[i]};
  }
};

ActiveAdjacency build_active(const Graph& graph, const std::vector<std::uint8_t>& active) {
  ActiveAdjacency adj;
  const std::size_t n = graph.node_count();
  adj.offsets.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    adj.offsets[i] = adj.targets.size();
    if (!active[i]) continue;
    for (NodeId j : graph.neighbors(static_cast<NodeId>(i))) {
      if (active[j]) adj.targets.push_back(j);
    }
  }
  adj.offsets[n] = adj.targets.size();
  return adj;
}

enum Stream : std::uint64_t { kNeighborPick = 0, kAccept = 1, kOrder = 3 };

}  // namespace

PayoffSeries simulate(const Graph& graph, const GameParams& params, const SimulationOptions& options) {
  params.validate();
  const std::size_t n = graph.node_count();
  const std::size_t T = params.rounds;

  std::vector<std::uint8_t> active(n, 1);
  for (NodeId v : options.suppressed) {
    if (v < 0 || static_cast<std::size_t>(v) >= n) {
      throw ParameterError("suppressed node " + std::to_string(v) + " is not in the graph");
    }
    active[v] = 0;
  }

  std::vector<Strategy> strategy;
  if (options.initial_strategies) {
    if (options.initial_strategies->size() != n) {
      throw ParameterError("initial strategy vector length does not match node count");
    }
    strategy = *options.initial_strategies;
  } else {
    strategy = initial_strategies(n, params);
  }

  PayoffSeries series(n, T);
  for (std::size_t i = 0; i < n; ++i) series.set_active(i, active[i] != 0);

  const ActiveAdjacency adj = build_active(graph, active);
  const PayoffMatrix& pm = params.payoff;
  std::vector<double> payoff(n, 0.0);
  std::vector<Strategy> next(strategy);
  std::vector<NodeId> order;
  if (params.schedule == UpdateSchedule::Asynchronous) {
    for (std::size_t i = 0; i < n; ++i) {
      if (active[i]) order.push_back(static_cast<NodeId>(i));
    }
  }

  std::size_t column = params.record_initial_payoff ? 1 : 0;
  for (std::uint64_t round = 1; column < T; ++round, ++column) {
    std::size_t discordant = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      auto nbrs = adj.of(i);
      std::size_t cooperators = 0;
      for (NodeId j : nbrs) cooperators += strategy[j] == Strategy::Cooperate;
      const std::size_t defectors = nbrs.size() - cooperators;
      const double c = static_cast<double>(cooperators);
      const double d = static_cast<double>(defectors);
      if (strategy[i] == Strategy::Cooperate) {
        payoff[i] = c * pm.r + d * pm.s;
        discordant += defectors;
      } else {
        payoff[i] = c * pm.t + d * pm.p;
        discordant += cooperators;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      auto row = series.row(i);
      row[column] = params.accumulate && column > 0 ? row[column - 1] + payoff[i] : payoff[i];
    }

    // No active edge joins different strategies: imitation can no longer
    // change anything, so the remaining rounds repeat this one.
    if (discordant == 0) {
      for (std::size_t i = 0; i < n; ++i) {
        auto row = series.row(i);
        for (std::size_t t = column + 1; t < T; ++t) {
          row[t] = params.accumulate ? row[t - 1] + (active[i] ? payoff[i] : 0.0) : row[column];
        }
      }
      break;
    }
    if (column + 1 == T) break;

    auto update = [&](std::size_t i, const std::vector<Strategy>& view, std::vector<Strategy>& out) {
      auto nbrs = adj.of(i);
      if (nbrs.empty()) return;
      const NodeId j = nbrs[bounded(counter_random(params.seed, round, i, kNeighborPick), nbrs.size())];
      if (view[j] == view[i]) return;
      const double w = fermi_probability(payoff[i], payoff[j], params.kappa);
      if (unit_double(counter_random(params.seed, round, i, kAccept)) < w) out[i] = view[j];
    };

    if (params.schedule == UpdateSchedule::Synchronous) {
      next = strategy;
      for (std::size_t i = 0; i < n; ++i) {
        if (active[i]) update(i, strategy, next);
      }
      strategy.swap(next);
    } else {
      for (std::size_t k = order.size(); k > 1; --k) {
        const std::size_t pick = bounded(counter_random(params.seed, round, k, kOrder), k);
        std::swap(order[k - 1], order[pick]);
      }
      for (NodeId i : order) update(static_cast<std::size_t>(i), strategy, strategy);
    }
  }
  return series;
}

PayoffSeries hide_nodes(PayoffSeries series, std::span<const NodeId> hidden) {
  for (NodeId v : hidden) {
    if (v < 0 || static_cast<std::size_t>(v) >= series.node_count()) {
      throw ParameterError("hidden node " + std::to_string(v) + " is not in the series");
    }
    series.set_observable(v, false);
    auto row = series.row(v);
    std::fill(row.begin(), row.end(), 0.0);
  }
  return series;
}

namespace {

void append_double(std::string& out, double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  out.append(buf, ptr);
}

std::vector<std::uint8_t> parse_mask(const std::string& line, const std::string& name, std::size_t n,
                                     std::size_t line_no) {
  std::istringstream in(line);
  std::string hash, tag;
  in >> hash >> tag;
  if (hash != "#" || tag != name) throw ParseError("expected '# " + name + "' header", line_no);
  std::vector<std::uint8_t> mask;
  int v;
  while (in >> v) {
    if (v != 0 && v != 1) throw ParseError(name + " mask entries must be 0 or 1", line_no);
    mask.push_back(static_cast<std::uint8_t>(v));
  }
  if (mask.size() != n) throw ParseError(name + " mask length does not match node count", line_no);
  return mask;
}

}  // namespace

std::string format_payoff_series(const PayoffSeries& series) {
  std::string out = "# payoff_series nodes=" + std::to_string(series.node_count()) +
                    " rounds=" + std::to_string(series.rounds()) + "\n# active";
  for (std::size_t i = 0; i < series.node_count(); ++i) out += series.active(i) ? " 1" : " 0";
  out += "\n# observable";
  for (std::size_t i = 0; i < series.node_count(); ++i) out += series.observable(i) ? " 1" : " 0";
  out += '\n';
  for (std::size_t i = 0; i < series.node_count(); ++i) {
    auto row = series.row(i);
    for (std::size_t t = 0; t < row.size(); ++t) {
      if (t) out += ',';
      append_double(out, row[t]);
    }
    out += '\n';
  }
  return out;
}

PayoffSeries parse_payoff_series(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty payoff series file", 1);
  std::size_t n = 0, T = 0;
  {
    std::istringstream head(line);
    std::string hash, tag, nodes_kv, rounds_kv;
    head >> hash >> tag >> nodes_kv >> rounds_kv;
    if (hash != "#" || tag != "payoff_series" || nodes_kv.rfind("nodes=", 0) != 0 ||
        rounds_kv.rfind("rounds=", 0) != 0) {
      throw ParseError("missing '# payoff_series nodes=N rounds=T' header", 1);
    }
    try {
      n = std::stoul(nodes_kv.substr(6));
      T = std::stoul(rounds_kv.substr(7));
    } catch (const std::exception&) {
      throw ParseError("invalid size in payoff series header", 1);
    }
  }
  PayoffSeries series(n, T);
  if (!std::getline(in, line)) throw ParseError("missing active mask", 2);
  auto active = parse_mask(line, "active", n, 2);
  if (!std::getline(in, line)) throw ParseError("missing observable mask", 3);
  auto observable = parse_mask(line, "observable", n, 3);
  for (std::size_t i = 0; i < n; ++i) {
    series.set_active(i, active[i] != 0);
    series.set_observable(i, observable[i] != 0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t line_no = i + 4;
    if (!std::getline(in, line)) throw ParseError("missing payoff row", line_no);
    auto row = series.row(i);
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (std::size_t t = 0; t < T; ++t) {
      auto [ptr, ec] = std::from_chars(p, end, row[t]);
      if (ec != std::errc{}) throw ParseError("invalid payoff value", line_no);
      p = ptr;
      if (t + 1 < T) {
        if (p == end || *p != ',') throw ParseError("expected " + std::to_string(T) + " values", line_no);
        ++p;
      }
    }
    while (p != end && (*p == '\r' || *p == ' ')) ++p;
    if (p != end) throw ParseError("trailing data after " + std::to_string(T) + " values", line_no);
  }
  return series;
}

void save_payoff_series(const PayoffSeries& series, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write payoff series '" + path.string() + "'");
  out << format_payoff_series(series);
}

PayoffSeries load_payoff_series(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open payoff series '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_payoff_series(buffer.str());
}

}  // namespace netrecon
