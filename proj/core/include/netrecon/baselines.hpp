#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "netrecon/game.hpp"

namespace netrecon {

enum class ScoreMethod { Dft, Correlation, MutualInformation, Granger };

std::string to_string(ScoreMethod method);

/// Pairwise association scores indexed by node id, row-major n x n, with a
/// zero diagonal. Rows that are hidden or suppressed score 0 against
/// everything.
struct ScoreMatrix {
  ScoreMethod method = ScoreMethod::Dft;
  std::size_t node_count = 0;
  std::vector<NodeId> nodes;  // usable rows the scores were computed from
  std::vector<double> scores;
  std::vector<std::string> warnings;

  double at(std::size_t a, std::size_t b) const { return scores[a * node_count + b]; }
};

/// Per-round increments of a cumulative series: column 0 is kept, column t
/// becomes x(t) - x(t-1). Masks are copied.
PayoffSeries increments(const PayoffSeries& series);

/// |Pearson correlation|. A constant row scores 0 against every other row.
/// Throws InputError for fewer than 2 usable rows or fewer than 3 columns.
ScoreMatrix correlation_scores(const PayoffSeries& series);

/// Plug-in mutual information in nats. Each row is cut into `bins`
/// equal-width bins spanning its own [min, max]; a constant row falls in a
/// single bin. Throws ParameterError when bins < 2.
ScoreMatrix mutual_information_scores(const PayoffSeries& series, std::size_t bins = 16);

/// Granger score of i -> j: log(RSS_restricted / RSS_full), where the
/// restricted model regresses j(t) on an intercept and j(t-1..t-order) and
/// the full model adds i(t-1..t-order); both fitted by ordinary least
/// squares over the same samples. Negative values are floored at 0, and the
/// matrix is symmetrized by max(i -> j, j -> i). A singular regression scores
/// 0 and is reported in `warnings`. Throws ParameterError unless order >= 1
/// and T > 10 * order.
ScoreMatrix granger_scores(const PayoffSeries& series, std::size_t order = 1);

/// CSV with header `i,j,score` and one line per pair of `nodes`, i < j.
std::string format_score_matrix(const ScoreMatrix& matrix);

}  // namespace netrecon
