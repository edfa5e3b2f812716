#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netrecon/graph.hpp"

namespace netrecon {

enum class Strategy : std::uint8_t { Cooperate = 0, Defect = 1 };

/// Prisoner's Dilemma payoff entries: r (C vs C), s (C vs D), t (D vs C),
/// p (D vs D).
struct PayoffMatrix {
  double r = 3.0;
  double s = 0.0;
  double t = 5.0;
  double p = 1.0;

  double operator()(Strategy self, Strategy other) const noexcept {
    if (self == Strategy::Cooperate) return other == Strategy::Cooperate ? r : s;
    return other == Strategy::Cooperate ? t : p;
  }
};

enum class UpdateSchedule {
  /// All nodes play, then all nodes update from the same snapshot.
  Synchronous,
  /// All nodes play, then nodes update one at a time in a random order,
  /// each seeing the strategies already updated earlier in the round.
  Asynchronous,
};

struct GameParams {
  PayoffMatrix payoff;
  double kappa = 1e8;
  /// Number of recorded samples per node (columns of the payoff series).
  std::size_t rounds = 1000;
  std::uint64_t seed = 0;
  UpdateSchedule schedule = UpdateSchedule::Synchronous;
  /// Probability that a node starts as a cooperator.
  double initial_cooperation = 0.5;
  /// When set, column 0 holds the zero payoff every node starts with and
  /// columns 1..T-1 hold rounds 1..T-1. Otherwise all T columns are rounds.
  bool record_initial_payoff = true;
  /// Record running totals of the per-round payoffs (the default). When
  /// false each column holds that round's payoff alone.
  bool accumulate = true;

  /// Throws ParameterError unless rounds >= 2, kappa > 0 and the initial
  /// cooperation probability lies in [0, 1].
  void validate() const;
};

/// Per-node payoff time series, N rows by T columns, row-major.
class PayoffSeries {
 public:
  PayoffSeries() = default;
  PayoffSeries(std::size_t nodes, std::size_t rounds);

  std::size_t node_count() const noexcept { return nodes_; }
  std::size_t rounds() const noexcept { return rounds_; }

  std::span<const double> row(std::size_t node) const {
    return {values_.data() + node * rounds_, rounds_};
  }
  std::span<double> row(std::size_t node) { return {values_.data() + node * rounds_, rounds_}; }
  double at(std::size_t node, std::size_t round) const { return values_[node * rounds_ + round]; }
  std::span<const double> values() const noexcept { return values_; }

  bool active(std::size_t node) const { return active_[node] != 0; }
  bool observable(std::size_t node) const { return observable_[node] != 0; }
  void set_active(std::size_t node, bool value) { active_.at(node) = value ? 1 : 0; }
  void set_observable(std::size_t node, bool value) { observable_.at(node) = value ? 1 : 0; }

  /// Nodes whose rows may be used for inference (observable and not
  /// suppressed), ascending.
  std::vector<NodeId> usable_nodes() const;
  std::vector<NodeId> observable_nodes() const;

  friend bool operator==(const PayoffSeries&, const PayoffSeries&) = default;

 private:
  std::size_t nodes_ = 0;
  std::size_t rounds_ = 0;
  std::vector<double> values_;
  std::vector<std::uint8_t> active_;
  std::vector<std::uint8_t> observable_;
};

/// Sum over neighbors of the payoff entry selected by (self, neighbor).
double round_payoff(Strategy self, std::span<const Strategy> neighbors, const PayoffMatrix& payoff);

/// Probability that a node with payoff `own` imitates a neighbor with payoff
/// `other`: 1 / (1 + exp((own - other) / kappa)). The exponent is clamped to
/// +-700; beyond it the limit value 0 or 1 is returned.
double fermi_probability(double own, double other, double kappa);

struct SimulationOptions {
  /// Nodes detached from the game: their edges are inactive, they never
  /// update and their payoff rows stay zero.
  std::vector<NodeId> suppressed;
  /// Overrides the seeded random initial strategies.
  std::optional<std::vector<Strategy>> initial_strategies;
};

/// Initial strategies drawn from the seed (one independent draw per node).
std::vector<Strategy> initial_strategies(std::size_t nodes, const GameParams& params);

/// Plays the game for params.rounds samples and records every node's payoff.
/// Output is a pure function of (graph, params, options).
PayoffSeries simulate(const Graph& graph, const GameParams& params,
                      const SimulationOptions& options = {});

/// Marks the given nodes unobservable and clears their rows.
PayoffSeries hide_nodes(PayoffSeries series, std::span<const NodeId> hidden);

/// CSV form: three header lines (`# payoff_series nodes=N rounds=T`,
/// `# active <0/1 per node>`, `# observable <0/1 per node>`), then one
/// comma-separated row of T values per node. Values are written in shortest
/// round-trip form, so write/read is exact.
std::string format_payoff_series(const PayoffSeries& series);
PayoffSeries parse_payoff_series(const std::string& text);
void save_payoff_series(const PayoffSeries& series, const std::filesystem::path& path);
PayoffSeries load_payoff_series(const std::filesystem::path& path);

}  // namespace netrecon
