#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netrecon/game.hpp"
#include "netrecon/graph.hpp"

namespace netrecon {

enum class ExperimentKind { Linearity, Reconstruct, LengthSweep, HiddenSingle, HiddenMulti, BaselinesRoc };

std::string to_string(ExperimentKind kind);
/// Throws ConfigError (path "experiment") for unknown names.
ExperimentKind parse_experiment_kind(const std::string& text);

/// Fully resolved experiment description. Build it with parse_config, which
/// fills defaults and validates every field.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Reconstruct;
  std::size_t trials = 1;
  std::uint64_t seed = 0;

  /// Synthetic graph; its seed is replaced per trial. Ignored when
  /// `edge_list` is set.
  GraphModelSpec graph;
  std::filesystem::path edge_list;
  bool labeled = false;

  /// Game parameters; `game.rounds` and `game.seed` are resolved per run.
  GameParams game;
  std::size_t rounds = 0;        // fixed T, or 0 to use rounds_per_node
  double rounds_per_node = 0.0;  // T = round(c * N)
  /// Lengths for length_sweep, each either fixed or per node.
  std::vector<std::size_t> sweep_rounds;
  std::vector<double> sweep_rounds_per_node;

  std::size_t burn_in = 0;
  double burn_in_fraction = 0.0;  // added to burn_in as floor(fraction * T)

  std::vector<NodeId> hidden_nodes;  // fixed hidden set
  std::size_t hidden_count = 0;      // or this many random nodes per trial

  bool exhaustive = false;

  std::size_t mi_bins = 16;
  std::size_t gc_order = 1;
  bool baseline_increments = true;  // baselines see per-round payoffs

  /// Resolved series length for a graph with n nodes (and sweep entry).
  std::size_t resolve_rounds(std::size_t n) const;
  std::vector<std::size_t> resolve_sweep(std::size_t n) const;
  std::size_t resolve_burn_in(std::size_t rounds) const;
};

/// Parses a JSON configuration and applies `path=value` overrides in order.
/// Unknown keys, wrong types and out-of-range values raise ConfigError
/// naming the offending field.
ExperimentConfig parse_config(const std::string& text, std::span<const std::string> overrides = {});
ExperimentConfig load_config(const std::filesystem::path& path, std::span<const std::string> overrides = {});
/// Applies overrides to an empty configuration.
ExperimentConfig default_config(std::span<const std::string> overrides = {});

/// Flattened `key,value` CSV of the resolved configuration.
std::string format_config(const ExperimentConfig& config);

/// Seeds used by one trial; all derive from the master seed.
struct TrialSeeds {
  std::uint64_t trial = 0;
  std::uint64_t graph = 0;
  std::uint64_t game = 0;
  std::uint64_t hidden = 0;
};

TrialSeeds trial_seeds(std::uint64_t master, std::size_t trial);

/// Graph of one trial: the edge list, or the model drawn with the trial's
/// graph seed.
Graph trial_graph(const ExperimentConfig& config, const TrialSeeds& seeds);

/// Hidden nodes of one trial: the fixed list, or `hidden_count` distinct
/// nodes of nonzero degree drawn with the trial's hidden seed (ascending).
std::vector<NodeId> trial_hidden(const ExperimentConfig& config, const Graph& graph, const TrialSeeds& seeds);

/// Named metric; NaN marks a value that is not available.
struct Metric {
  std::string name;
  double value = 0.0;
};

/// Rows destined for one CSV file, merged across trials in trial order.
struct Table {
  std::string file;
  std::string header;
  std::vector<std::string> rows;
};

struct TrialRecord {
  std::size_t trial = 0;
  TrialSeeds seeds;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t rounds = 0;
  std::vector<NodeId> hidden;
  std::vector<Metric> metrics;
  std::vector<Table> tables;
  /// Edge lists written as separate files (relative path, graph).
  std::vector<std::pair<std::string, Graph>> graphs;
  double seconds = 0.0;  // wall time; reported, never written to files

  std::optional<double> metric(const std::string& name) const;
};

struct SummaryRow {
  std::string metric;
  std::size_t rounds = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (0 for a single value)
  std::size_t count = 0;
};

/// Two-group split of positive values on a log scale, used to count the
/// modes of fitted strength-per-degree scales.
struct ModeSplit {
  std::size_t modes = 1;
  double low = 0.0;   // geometric mean of the lower group (or of all values)
  double high = 0.0;  // geometric mean of the upper group (or of all values)
  double ratio = 1.0;
  std::size_t low_count = 0;
  std::size_t high_count = 0;
};

/// Splits sorted log values at the point minimizing within-group squared
/// deviation. Two modes are reported when the gap between the group means
/// exceeds `separation` times the pooled within-group standard deviation and
/// the groups differ by more than 10% in scale. Throws InputError for
/// non-positive values.
ModeSplit split_modes(std::span<const double> values, double separation = 4.0);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialRecord> records;  // ordered by (trial, rounds)
  std::vector<SummaryRow> summary;
  std::vector<Table> tables;         // experiment-level tables (modes)
  std::string error;                 // first trial failure, empty on success
};

/// Runs one trial (all sweep lengths for length_sweep).
std::vector<TrialRecord> run_trial(const ExperimentConfig& config, std::size_t trial);

/// Runs all trials on up to `jobs` threads. A failing trial does not stop
/// the others; its message lands in `error` and it is missing from
/// `records`.
ExperimentResult run(const ExperimentConfig& config, std::size_t jobs = 1);

/// Mean and sample standard deviation per (metric, rounds), skipping NaN.
std::vector<SummaryRow> summarize(std::span<const TrialRecord> records);

/// Writes trials.csv, summary.csv, config.csv, the merged tables and edge
/// lists under `dir`. Output bytes depend only on the configuration.
void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

/// CSV text of the per-trial metrics.
std::string format_trials(std::span<const TrialRecord> records);
std::string format_summary(std::span<const SummaryRow> rows);

/// Shortest round-trip decimal form; "NA" for NaN.
std::string format_number(double value);

}  // namespace netrecon
