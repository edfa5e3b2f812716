#include "netrecon/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "netrecon/error.hpp"

namespace netrecon {

double nonzero_median(std::span<const double> values) {
  std::vector<double> nz;
  for (double v : values) {
    if (v != 0.0) nz.push_back(v);
  }
  if (nz.empty()) return 0.0;
  std::sort(nz.begin(), nz.end());
  const std::size_t m = nz.size() / 2;
  return nz.size() % 2 ? nz[m] : nz[m - 1];
}

namespace {

// Normalized residuals are in squared degree units; differences below this
// are floating-point noise.
constexpr double kTieTolerance = 1e-9;

}  // namespace

DegreeEstimate estimate_degrees(std::span<const double> strengths, DegreeSearch search) {
  DegreeEstimate best;
  best.degree.assign(strengths.size(), 0);
  const double median = nonzero_median(strengths);
  if (median == 0.0) return best;

  const std::size_t last = std::max<std::size_t>(strengths.size(), 2) - 1;
  std::vector<std::size_t> trial(strengths.size());
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t candidate = 1; candidate <= last; ++candidate) {
    const double scale = median / static_cast<double>(candidate);
    double error = 0.0;
    for (std::size_t i = 0; i < strengths.size(); ++i) {
      trial[i] = round_degree(strengths[i] / scale);
      const double r = strengths[i] - static_cast<double>(trial[i]) * scale;
      error += r * r;
    }
    const double score = search == DegreeSearch::Full ? error / (scale * scale) : error;
    // In the full scan exact data makes every divisor of the true scale fit
    // to rounding noise; a finer grid must win by a real margin.
    const double margin = search == DegreeSearch::Full ? kTieTolerance : 0.0;
    if (!(score < best_score - margin)) {
      if (search == DegreeSearch::EarlyExit) break;
      continue;
    }
    best_score = score;
    best.degree = trial;
    best.scale = scale;
    best.residual = error;
    best.reference_degree = candidate;
  }
  return best;
}

std::vector<std::size_t> identify_neighbors(std::span<const std::size_t> reference,
                                            std::span<const std::size_t> perturbed, std::ptrdiff_t skip) {
  if (reference.size() != perturbed.size()) {
    throw InputError("degree vectors differ in length");
  }
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < reference.size(); ++j) {
    if (static_cast<std::ptrdiff_t>(j) == skip) continue;
    if (perturbed[j] < reference[j]) out.push_back(j);
  }
  return out;
}

HiddenBounds hidden_bounds(std::span<const std::size_t> hidden_links) {
  HiddenBounds b;
  for (std::size_t l : hidden_links) {
    b.lower = std::max(b.lower, l);
    b.upper += l;
  }
  return b;
}

SimulationSource::SimulationSource(Graph graph, GameParams params, std::vector<NodeId> hidden)
    : graph_(std::move(graph)), params_(params), hidden_(std::move(hidden)) {
  params_.validate();
  for (NodeId h : hidden_) {
    if (h < 0 || static_cast<std::size_t>(h) >= graph_.node_count()) {
      throw ParameterError("hidden node " + std::to_string(h) + " is not in the graph");
    }
  }
}

PayoffSeries SimulationSource::base() {
  ++simulations_;
  return hide_nodes(simulate(graph_, params_), hidden_);
}

PayoffSeries SimulationSource::suppressed(NodeId node) {
  if (std::find(hidden_.begin(), hidden_.end(), node) != hidden_.end()) {
    throw InputError("hidden node " + std::to_string(node) + " cannot be suppressed");
  }
  ++simulations_;
  SimulationOptions options;
  options.suppressed = {node};
  return hide_nodes(simulate(graph_, params_, options), hidden_);
}

std::vector<Edge> ReconstructionResult::edges() const {
  std::vector<Edge> out;
  for (std::size_t a = 0; a < node_count; ++a) {
    for (std::size_t b = a + 1; b < node_count; ++b) {
      if (adjacency[a * node_count + b]) out.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
    }
  }
  return out;
}

Graph ReconstructionResult::graph() const {
  const auto e = edges();
  return Graph(node_count, e);
}

std::size_t ReconstructionResult::perturbations() const {
  return static_cast<std::size_t>(
      std::count_if(log.begin(), log.end(), [](const PerturbRecord& r) { return r.perturbed; }));
}

namespace {

// Degree estimate spread back onto node ids; unusable nodes get degree 0
// and a NaN unrounded estimate.
struct NodeDegrees {
  std::vector<std::size_t> degree;
  std::vector<double> continuous;
  double scale = 0.0;
};

NodeDegrees degrees_by_node(const PayoffSeries& series, const StrengthOptions& options) {
  NodeDegrees out;
  const std::size_t n = series.node_count();
  out.degree.assign(n, 0);
  out.continuous.assign(n, std::numeric_limits<double>::quiet_NaN());
  const auto sv = strength(series, options);
  const auto est = estimate_degrees(sv.strength);
  out.scale = est.scale;
  for (std::size_t k = 0; k < sv.size(); ++k) {
    out.degree[sv.nodes[k]] = est.degree[k];
    out.continuous[sv.nodes[k]] = est.scale > 0.0 ? sv.strength[k] / est.scale : 0.0;
  }
  return out;
}

}  // namespace

ReconstructionResult reconstruct(PerturbationSource& source, const ReconstructOptions& options) {
  const PayoffSeries base = source.base();
  ReconstructionResult result;
  const std::size_t n = base.node_count();
  result.node_count = n;
  result.observable = base.usable_nodes();
  if (result.observable.empty()) throw InputError("no observable nodes to reconstruct");

  const NodeDegrees ref = degrees_by_node(base, options.strength);
  result.reference_degree = ref.degree;
  result.reference_scale = ref.scale;
  result.adjacency.assign(n * n, 0);
  result.hidden_links.assign(n, 0);
  result.pair_score.assign(n * n, std::numeric_limits<double>::quiet_NaN());

  std::vector<std::uint8_t> observable(n, 0);
  for (NodeId v : result.observable) observable[v] = 1;
  std::vector<std::size_t> known(n, 0);

  auto link = [&](std::size_t a, std::size_t b) {
    auto& cell = result.adjacency[a * n + b];
    if (cell) return;
    cell = result.adjacency[b * n + a] = 1;
    ++known[a];
    ++known[b];
  };
  auto record_score = [&](std::size_t a, std::size_t b, double value) {
    for (double* cell : {&result.pair_score[a * n + b], &result.pair_score[b * n + a]}) {
      if (std::isnan(*cell) || value > *cell) *cell = value;
    }
  };

  for (NodeId node : result.observable) {
    const auto i = static_cast<std::size_t>(node);
    PerturbRecord rec{node, ref.degree[i], 0, false};
    if (!options.exhaustive && known[i] >= ref.degree[i]) {
      rec.neighbors_found = known[i];
      result.log.push_back(rec);
      continue;
    }
    if (options.exhaustive && ref.degree[i] == 0) {
      result.log.push_back(rec);
      continue;
    }
    const PayoffSeries perturbed = source.suppressed(node);
    const NodeDegrees now = degrees_by_node(perturbed, options.strength);

    std::vector<std::size_t> found;
    for (NodeId other : result.observable) {
      const auto j = static_cast<std::size_t>(other);
      if (j == i) continue;
      if (now.degree[j] < ref.degree[j]) found.push_back(j);
      if (!std::isnan(ref.continuous[j]) && !std::isnan(now.continuous[j])) {
        record_score(i, j, ref.continuous[j] - now.continuous[j]);
      }
    }
    for (std::size_t j : found) link(i, j);

    rec.perturbed = true;
    rec.neighbors_found = found.size();
    if (found.size() < ref.degree[i]) {
      result.hidden_links[i] = ref.degree[i] - found.size();
    } else if (found.size() > ref.degree[i]) {
      result.warnings.push_back("node " + std::to_string(node) + ": found " + std::to_string(found.size()) +
                                " neighbors but reference degree is " + std::to_string(ref.degree[i]));
    }
    result.log.push_back(rec);
  }
  result.bounds = hidden_bounds(result.hidden_links);
  return result;
}

LinearityFit fit_linearity(std::span<const double> strength, std::span<const std::size_t> degree) {
  if (strength.size() != degree.size()) throw InputError("strength and degree vectors differ in length");
  LinearityFit fit;
  std::vector<double> lx, ly;
  double sk = 0.0, kk = 0.0;
  for (std::size_t i = 0; i < strength.size(); ++i) {
    if (strength[i] <= 0.0 || degree[i] == 0) {
      ++fit.excluded;
      continue;
    }
    const double k = static_cast<double>(degree[i]);
    lx.push_back(std::log(k));
    ly.push_back(std::log(strength[i]));
    sk += strength[i] * k;
    kk += k * k;
  }
  fit.used = lx.size();
  std::vector<double> distinct(lx);
  std::sort(distinct.begin(), distinct.end());
  if (std::unique(distinct.begin(), distinct.end()) - distinct.begin() < 2) {
    throw InputError("linearity fit needs at least two distinct degrees");
  }
  const double m = static_cast<double>(fit.used);
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / m;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  fit.beta = sxy / sxx;
  fit.intercept = my - fit.beta * mx;
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  fit.scale = sk / kk;
  return fit;
}

}  // namespace netrecon
