#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "netrecon/game.hpp"
#include "netrecon/graph.hpp"
#include "netrecon/spectral.hpp"

namespace netrecon {

/// Integer degrees recovered from spectral strengths.
struct DegreeEstimate {
  std::vector<std::size_t> degree;  // parallel to the input strengths
  double scale = 0.0;               // strength per unit degree (S_p)
  double residual = 0.0;            // sum of (S_i - degree_i * scale)^2
  std::size_t reference_degree = 0;  // degree assigned to the median strength
};

/// Median of the nonzero entries. For an even count this is the lower of the
/// two central values, so the median is always one node's own strength.
/// Returns 0 when every entry is zero.
double nonzero_median(std::span<const double> values);

/// Rounds half away from zero.
inline std::size_t round_degree(double x) { return x <= 0.0 ? 0 : static_cast<std::size_t>(std::round(x)); }

enum class DegreeSearch {
  /// Scan every candidate and keep the one whose residual, measured in
  /// units of its own scale (epsilon / scale^2), is smallest. Scores within
  /// 1e-9 of each other count as ties, which go to the smaller candidate.
  Full,
  /// Stop at the first candidate whose raw residual does not strictly
  /// improve and return the best so far.
  EarlyExit,
};

/// Searches for the strength-per-degree scale that best explains the
/// strengths as integer multiples.
///
/// Candidate scales are S_med / c for c = 1, 2, ..., max(|S|-1, 1), with
/// S_med the median nonzero strength. Each candidate assigns
/// k_i = round(S_i / scale) and is scored by the squared residual
/// epsilon = sum (S_i - k_i * scale)^2. All-zero input gives all-zero degrees.
///
/// The raw residual is not unimodal in c (exact strengths of BA graphs
/// already break it), and it shrinks like scale^2 for every finer grid, so
/// the default search compares epsilon / scale^2 across all candidates.
DegreeEstimate estimate_degrees(std::span<const double> strengths, DegreeSearch search = DegreeSearch::Full);

/// Indices whose estimated degree strictly dropped (`skip` excluded).
std::vector<std::size_t> identify_neighbors(std::span<const std::size_t> reference,
                                            std::span<const std::size_t> perturbed,
                                            std::ptrdiff_t skip = -1);

struct HiddenBounds {
  std::size_t lower = 0;  // max L(i)
  std::size_t upper = 0;  // sum L(i)

  friend bool operator==(const HiddenBounds&, const HiddenBounds&) = default;
};

HiddenBounds hidden_bounds(std::span<const std::size_t> hidden_links);

/// Supplies payoff series for reconstruction: the unperturbed run and, on
/// request, a run with one node detached from the game.
class PerturbationSource {
 public:
  virtual ~PerturbationSource() = default;
  virtual PayoffSeries base() = 0;
  virtual PayoffSeries suppressed(NodeId node) = 0;
};

/// Re-simulates the game on a known graph. Every run reuses the same seed,
/// so initial strategies and per-node random draws line up with the base run.
/// Hidden nodes take part in the game but their rows are never exposed, and
/// they cannot be suppressed.
class SimulationSource final : public PerturbationSource {
 public:
  SimulationSource(Graph graph, GameParams params, std::vector<NodeId> hidden = {});

  PayoffSeries base() override;
  PayoffSeries suppressed(NodeId node) override;

  std::size_t simulations() const noexcept { return simulations_; }

 private:
  Graph graph_;
  GameParams params_;
  std::vector<NodeId> hidden_;
  std::size_t simulations_ = 0;
};

struct ReconstructOptions {
  StrengthOptions strength;
  /// Perturb every observable node with a nonzero reference degree instead
  /// of skipping nodes whose neighborhood is already complete. Required for
  /// full pair scores.
  bool exhaustive = false;
};

struct PerturbRecord {
  NodeId node = 0;
  std::size_t reference_degree = 0;
  std::size_t neighbors_found = 0;
  bool perturbed = false;
};

struct ReconstructionResult {
  std::size_t node_count = 0;           // rows of the series (observable or not)
  std::vector<NodeId> observable;       // ascending
  std::vector<std::uint8_t> adjacency;  // node_count^2, row-major, symmetric
  std::vector<std::size_t> reference_degree;  // by node id; 0 for hidden
  std::vector<std::size_t> hidden_links;      // L, by node id
  HiddenBounds bounds;
  double reference_scale = 0.0;
  std::vector<PerturbRecord> log;
  /// Continuous evidence per pair, row-major: for suppressed node i and
  /// observable j, the drop in j's unrounded degree estimate S_j / S_p
  /// between the base and perturbed runs, symmetrized by max. NaN where no
  /// perturbation touched the pair.
  std::vector<double> pair_score;
  std::vector<std::string> warnings;

  bool edge(NodeId a, NodeId b) const { return adjacency[static_cast<std::size_t>(a) * node_count + b] != 0; }
  std::vector<Edge> edges() const;
  Graph graph() const;
  std::size_t perturbations() const;
};

/// Perturbation-based reconstruction.
///
/// Reference degrees come from the base run. Nodes are visited in ascending
/// order; a node whose known neighbor count already reaches its reference
/// degree is skipped (unless `exhaustive`). Otherwise the node is
/// suppressed, degrees are re-estimated from the perturbed run, every node
/// whose degree dropped becomes a neighbor (recorded symmetrically), and the
/// shortfall k_ref(i) - |found| is recorded as L(i). Throws InputError when
/// the base run has no observable rows.
ReconstructionResult reconstruct(PerturbationSource& source, const ReconstructOptions& options = {});

struct LinearityFit {
  double beta = 0.0;       // slope of log S on log k
  double intercept = 0.0;  // of the log-log fit
  double r_squared = 0.0;
  double scale = 0.0;      // least squares S = scale * k through the origin
  std::size_t used = 0;
  std::size_t excluded = 0;  // nodes with S = 0 or k = 0
};

/// Throws InputError when fewer than two distinct degrees remain.
LinearityFit fit_linearity(std::span<const double> strength, std::span<const std::size_t> degree);

}  // namespace netrecon
