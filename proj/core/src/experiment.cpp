#include "netrecon/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "netrecon/baselines.hpp"
#include "netrecon/error.hpp"
#include "netrecon/inference.hpp"
#include "netrecon/metrics.hpp"
#include "netrecon/rng.hpp"
#include "netrecon/spectral.hpp"

namespace netrecon {

using json = nlohmann::json;

namespace {

constexpr std::pair<ExperimentKind, const char*> kKindNames[] = {
    {ExperimentKind::Linearity, "linearity"},       {ExperimentKind::Reconstruct, "reconstruct"},
    {ExperimentKind::LengthSweep, "length_sweep"},  {ExperimentKind::HiddenSingle, "hidden_single"},
    {ExperimentKind::HiddenMulti, "hidden_multi"},  {ExperimentKind::BaselinesRoc, "baselines_roc"},
};

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

ExperimentKind parse_experiment_kind(const std::string& text) {
  for (const auto& [k, name] : kKindNames) {
    if (text == name) return k;
  }
  throw ConfigError("experiment", "unknown experiment '" + text + "'");
}

std::string format_number(double value) {
  if (std::isnan(value)) return "NA";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// configuration

namespace {

// Reads fields of one JSON object, remembering which keys were consumed so
// leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_, "expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* raw(const std::string& key) {
    used_.insert(key);
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  double number(const std::string& key, double fallback) {
    const json* v = raw(key);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError(field(key), "expected a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) throw ConfigError(field(key), "must be finite");
    return d;
  }

  std::uint64_t count(const std::string& key, std::uint64_t fallback) {
    const json* v = raw(key);
    if (!v) return fallback;
    return as_count(*v, field(key));
  }

  bool flag(const std::string& key, bool fallback) {
    const json* v = raw(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(field(key), "expected true or false");
    return v->get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const json* v = raw(key);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(field(key), "expected a string");
    return v->get<std::string>();
  }

  std::optional<Section> child(const std::string& key) {
    const json* v = raw(key);
    if (!v) return std::nullopt;
    return Section(*v, field(key));
  }

  const json* array(const std::string& key) {
    const json* v = raw(key);
    if (v && !v->is_array()) throw ConfigError(field(key), "expected an array");
    return v;
  }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!used_.count(it.key())) throw ConfigError(field(it.key()), "unknown key");
    }
  }

  static std::uint64_t as_count(const json& v, const std::string& where) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) throw ConfigError(where, "must not be negative");
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d >= 0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
    }
    throw ConfigError(where, "expected a nonnegative integer");
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> used_;
};

void apply_override(json& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("", "override '" + assignment + "' is not of the form path=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &root;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError(path, "empty path component");
    if (!node->is_object()) throw ConfigError(path.substr(0, start ? start - 1 : 0), "is not an object");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

UpdateSchedule parse_schedule(const std::string& text, const std::string& where) {
  if (text == "synchronous") return UpdateSchedule::Synchronous;
  if (text == "asynchronous") return UpdateSchedule::Asynchronous;
  throw ConfigError(where, "expected 'synchronous' or 'asynchronous'");
}

ExperimentConfig from_json(const json& root) {
  ExperimentConfig c;
  Section top(root, "");
  c.kind = parse_experiment_kind(top.text("experiment", "reconstruct"));
  c.trials = top.count("trials", 1);
  if (c.trials < 1) throw ConfigError("trials", "must be at least 1");
  c.seed = top.count("seed", 0);

  std::size_t n = 0;
  if (auto g = top.child("graph")) {
    if (g->has("edge_list")) {
      c.edge_list = g->text("edge_list", "");
      c.labeled = g->flag("labeled", false);
      if (!std::filesystem::exists(c.edge_list)) {
        throw ConfigError(g->field("edge_list"), "file not found: " + c.edge_list.string());
      }
      try {
        n = (c.labeled ? load_labeled_edge_list(c.edge_list) : load_edge_list(c.edge_list)).node_count();
      } catch (const ParseError& e) {
        throw ConfigError(g->field("edge_list"), e.what());
      }
    } else {
      try {
        c.graph.model = parse_graph_model(g->text("model", "ER"));
      } catch (const ParameterError& e) {
        throw ConfigError(g->field("model"), e.what());
      }
      c.graph.n = g->count("n", 100);
      switch (c.graph.model) {
        case GraphModel::ErdosRenyi:
          c.graph.edge_probability = g->number("p", 0.1133);
          break;
        case GraphModel::BarabasiAlbert:
          c.graph.attachment = g->count("m", 6);
          break;
        case GraphModel::WattsStrogatz:
          c.graph.ring_degree = g->count("k", 12);
          c.graph.rewire_probability = g->number("p", 0.1);
          break;
      }
      try {
        c.graph.validate();
      } catch (const ParameterError& e) {
        throw ConfigError("graph", e.what());
      }
      n = c.graph.n;
    }
    g->finish();
  } else {
    c.graph.model = GraphModel::ErdosRenyi;
    c.graph.n = 100;
    c.graph.edge_probability = 0.1133;
    n = c.graph.n;
  }

  if (auto g = top.child("game")) {
    c.game.payoff.r = g->number("r", 3.0);
    c.game.payoff.s = g->number("s", 0.0);
    c.game.payoff.t = g->number("t", 5.0);
    c.game.payoff.p = g->number("p", 1.0);
    c.game.kappa = g->number("kappa", 1e8);
    if (!(c.game.kappa > 0)) throw ConfigError(g->field("kappa"), "must be positive");
    c.rounds = g->count("rounds", 0);
    c.rounds_per_node = g->number("rounds_per_node", 0.0);
    if (g->has("rounds") && g->has("rounds_per_node")) {
      throw ConfigError(g->field("rounds"), "give either rounds or rounds_per_node, not both");
    }
    if (g->has("rounds_per_node") && !(c.rounds_per_node > 0)) {
      throw ConfigError(g->field("rounds_per_node"), "must be positive");
    }
    c.game.schedule = parse_schedule(g->text("schedule", "synchronous"), g->field("schedule"));
    c.game.initial_cooperation = g->number("initial_cooperation", 0.5);
    if (c.game.initial_cooperation < 0 || c.game.initial_cooperation > 1) {
      throw ConfigError(g->field("initial_cooperation"), "must lie in [0, 1]");
    }
    c.game.accumulate = g->flag("cumulative", true);
    c.game.record_initial_payoff = g->flag("record_initial_payoff", true);
    g->finish();
  }
  if (c.rounds == 0 && c.rounds_per_node == 0.0) {
    if (c.kind == ExperimentKind::Linearity) c.rounds = 10000;
    else c.rounds_per_node = 20.0;
  }

  if (auto s = top.child("strength")) {
    c.burn_in = s->count("burn_in", 0);
    c.burn_in_fraction = s->number("burn_in_fraction", 0.0);
    if (c.burn_in_fraction < 0 || c.burn_in_fraction >= 1) {
      throw ConfigError(s->field("burn_in_fraction"), "must lie in [0, 1)");
    }
    s->finish();
  }

  if (auto h = top.child("hidden")) {
    if (const json* nodes = h->array("nodes")) {
      for (std::size_t k = 0; k < nodes->size(); ++k) {
        const auto v = Section::as_count((*nodes)[k], h->field("nodes") + "[" + std::to_string(k) + "]");
        if (v >= n) throw ConfigError(h->field("nodes"), "node " + std::to_string(v) + " is not in the graph");
        c.hidden_nodes.push_back(static_cast<NodeId>(v));
      }
      std::sort(c.hidden_nodes.begin(), c.hidden_nodes.end());
      if (std::adjacent_find(c.hidden_nodes.begin(), c.hidden_nodes.end()) != c.hidden_nodes.end()) {
        throw ConfigError(h->field("nodes"), "duplicate hidden node");
      }
    }
    c.hidden_count = h->count("count", 0);
    if (!c.hidden_nodes.empty() && h->has("count")) {
      throw ConfigError(h->field("count"), "give either nodes or count, not both");
    }
    h->finish();
  }
  const std::size_t hidden = c.hidden_nodes.empty() ? c.hidden_count : c.hidden_nodes.size();
  if (hidden >= n && hidden > 0) throw ConfigError("hidden", "hidden count must be smaller than the node count");
  switch (c.kind) {
    case ExperimentKind::HiddenSingle:
      if (hidden == 0) c.hidden_count = 1;
      else if (hidden != 1) throw ConfigError("hidden", "hidden_single needs exactly one hidden node");
      break;
    case ExperimentKind::HiddenMulti:
      if (hidden == 0) throw ConfigError("hidden", "hidden_multi needs hidden.count or hidden.nodes");
      break;
    case ExperimentKind::Linearity:
      if (hidden > 0) throw ConfigError("hidden", "linearity runs have no hidden nodes");
      break;
    default:
      break;
  }

  if (auto r = top.child("reconstruct")) {
    c.exhaustive = r->flag("exhaustive", false);
    r->finish();
  }

  if (auto s = top.child("sweep")) {
    if (const json* list = s->array("rounds")) {
      for (std::size_t k = 0; k < list->size(); ++k) {
        c.sweep_rounds.push_back(Section::as_count((*list)[k], s->field("rounds") + "[" + std::to_string(k) + "]"));
      }
    }
    if (const json* list = s->array("rounds_per_node")) {
      for (std::size_t k = 0; k < list->size(); ++k) {
        const std::string where = s->field("rounds_per_node") + "[" + std::to_string(k) + "]";
        if (!(*list)[k].is_number() || !((*list)[k].get<double>() > 0)) throw ConfigError(where, "expected a positive number");
        c.sweep_rounds_per_node.push_back((*list)[k].get<double>());
      }
    }
    s->finish();
  }
  if (c.kind == ExperimentKind::LengthSweep) {
    if (!c.sweep_rounds.empty() && !c.sweep_rounds_per_node.empty()) {
      throw ConfigError("sweep", "give either rounds or rounds_per_node, not both");
    }
    if (c.sweep_rounds.size() + c.sweep_rounds_per_node.size() < 2) {
      throw ConfigError("sweep", "length_sweep needs at least two lengths");
    }
  }

  if (auto b = top.child("baselines")) {
    c.mi_bins = b->count("mi_bins", 16);
    if (c.mi_bins < 2) throw ConfigError(b->field("mi_bins"), "must be at least 2");
    c.gc_order = b->count("gc_order", 1);
    if (c.gc_order < 1) throw ConfigError(b->field("gc_order"), "must be at least 1");
    const std::string input = b->text("input", "increments");
    if (input != "increments" && input != "raw") throw ConfigError(b->field("input"), "expected 'increments' or 'raw'");
    c.baseline_increments = input == "increments";
    b->finish();
  }
  top.finish();

  // Length checks need n, which is known for both graph sources here.
  std::vector<std::size_t> lengths;
  if (c.kind == ExperimentKind::LengthSweep) lengths = c.resolve_sweep(n);
  else lengths.push_back(c.resolve_rounds(n));
  for (std::size_t T : lengths) {
    if (T < 2) throw ConfigError("game.rounds", "series length resolves to " + std::to_string(T) + ", need at least 2");
    if (c.resolve_burn_in(T) + 2 > T) throw ConfigError("strength", "burn-in leaves fewer than 2 samples");
    if (c.kind == ExperimentKind::BaselinesRoc && T <= 10 * c.gc_order) {
      throw ConfigError("baselines.gc_order", "Granger scores need more than 10 * order samples");
    }
  }
  return c;
}

}  // namespace

std::size_t ExperimentConfig::resolve_rounds(std::size_t n) const {
  if (rounds > 0) return rounds;
  return static_cast<std::size_t>(std::llround(rounds_per_node * static_cast<double>(n)));
}

std::vector<std::size_t> ExperimentConfig::resolve_sweep(std::size_t n) const {
  std::vector<std::size_t> out(sweep_rounds);
  for (double c : sweep_rounds_per_node) out.push_back(static_cast<std::size_t>(std::llround(c * static_cast<double>(n))));
  return out;
}

std::size_t ExperimentConfig::resolve_burn_in(std::size_t T) const {
  return burn_in + static_cast<std::size_t>(std::floor(burn_in_fraction * static_cast<double>(T)));
}

ExperimentConfig parse_config(const std::string& text, std::span<const std::string> overrides) {
  json root = json::parse(text, nullptr, false, true);
  if (root.is_discarded()) throw ConfigError("", "configuration is not valid JSON");
  if (root.is_null()) root = json::object();
  for (const auto& o : overrides) apply_override(root, o);
  return from_json(root);
}

ExperimentConfig load_config(const std::filesystem::path& path, std::span<const std::string> overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read configuration file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

ExperimentConfig default_config(std::span<const std::string> overrides) { return parse_config("{}", overrides); }

std::string format_config(const ExperimentConfig& c) {
  std::vector<std::pair<std::string, std::string>> kv;
  auto add = [&](const std::string& k, const std::string& v) { kv.emplace_back(k, v); };
  auto join = [](const auto& values, auto fmt) {
    std::string s;
    for (const auto& v : values) s += (s.empty() ? "" : ";") + fmt(v);
    return s;
  };
  add("experiment", to_string(c.kind));
  add("trials", std::to_string(c.trials));
  add("seed", std::to_string(c.seed));
  if (!c.edge_list.empty()) {
    add("graph.edge_list", c.edge_list.string());
    add("graph.labeled", c.labeled ? "true" : "false");
  } else {
    add("graph.model", to_string(c.graph.model));
    add("graph.n", std::to_string(c.graph.n));
    switch (c.graph.model) {
      case GraphModel::ErdosRenyi: add("graph.p", format_number(c.graph.edge_probability)); break;
      case GraphModel::BarabasiAlbert: add("graph.m", std::to_string(c.graph.attachment)); break;
      case GraphModel::WattsStrogatz:
        add("graph.k", std::to_string(c.graph.ring_degree));
        add("graph.p", format_number(c.graph.rewire_probability));
        break;
    }
  }
  add("game.r", format_number(c.game.payoff.r));
  add("game.s", format_number(c.game.payoff.s));
  add("game.t", format_number(c.game.payoff.t));
  add("game.p", format_number(c.game.payoff.p));
  add("game.kappa", format_number(c.game.kappa));
  if (c.rounds > 0) add("game.rounds", std::to_string(c.rounds));
  else add("game.rounds_per_node", format_number(c.rounds_per_node));
  add("game.schedule", c.game.schedule == UpdateSchedule::Synchronous ? "synchronous" : "asynchronous");
  add("game.initial_cooperation", format_number(c.game.initial_cooperation));
  add("game.cumulative", c.game.accumulate ? "true" : "false");
  add("game.record_initial_payoff", c.game.record_initial_payoff ? "true" : "false");
  add("strength.burn_in", std::to_string(c.burn_in));
  add("strength.burn_in_fraction", format_number(c.burn_in_fraction));
  if (!c.hidden_nodes.empty()) add("hidden.nodes", join(c.hidden_nodes, [](NodeId v) { return std::to_string(v); }));
  else add("hidden.count", std::to_string(c.hidden_count));
  add("reconstruct.exhaustive", c.exhaustive ? "true" : "false");
  if (c.kind == ExperimentKind::LengthSweep) {
    if (!c.sweep_rounds.empty()) add("sweep.rounds", join(c.sweep_rounds, [](std::size_t v) { return std::to_string(v); }));
    else add("sweep.rounds_per_node", join(c.sweep_rounds_per_node, [](double v) { return format_number(v); }));
  }
  add("baselines.mi_bins", std::to_string(c.mi_bins));
  add("baselines.gc_order", std::to_string(c.gc_order));
  add("baselines.input", c.baseline_increments ? "increments" : "raw");

  std::string out = "key,value\n";
  for (const auto& [k, v] : kv) out += k + "," + v + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// trials

TrialSeeds trial_seeds(std::uint64_t master, std::size_t trial) {
  TrialSeeds s;
  s.trial = derive_seed(master, trial);
  s.graph = derive_seed(s.trial, 1);
  s.game = derive_seed(s.trial, 2);
  s.hidden = derive_seed(s.trial, 3);
  return s;
}

Graph trial_graph(const ExperimentConfig& config, const TrialSeeds& seeds) {
  if (!config.edge_list.empty()) {
    return config.labeled ? load_labeled_edge_list(config.edge_list) : load_edge_list(config.edge_list);
  }
  GraphModelSpec spec = config.graph;
  spec.seed = seeds.graph;
  return generate(spec);
}

std::vector<NodeId> trial_hidden(const ExperimentConfig& config, const Graph& graph, const TrialSeeds& seeds) {
  if (!config.hidden_nodes.empty()) {
    for (NodeId v : config.hidden_nodes) {
      if (static_cast<std::size_t>(v) >= graph.node_count()) {
        throw ConfigError("hidden.nodes", "node " + std::to_string(v) + " is not in the graph");
      }
    }
    return config.hidden_nodes;
  }
  if (config.hidden_count == 0) return {};
  std::vector<NodeId> pool;
  for (std::size_t v = 0; v < graph.node_count(); ++v) {
    if (graph.degree(static_cast<NodeId>(v)) > 0) pool.push_back(static_cast<NodeId>(v));
  }
  if (pool.size() < config.hidden_count) throw InputError("not enough connected nodes to hide");
  SplitMix64 rng(seeds.hidden);
  for (std::size_t k = 0; k < config.hidden_count; ++k) {
    std::swap(pool[k], pool[k + rng.below(pool.size() - k)]);
  }
  pool.resize(config.hidden_count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::optional<double> TrialRecord::metric(const std::string& name) const {
  for (const auto& m : metrics) {
    if (m.name == name) return m.value;
  }
  return std::nullopt;
}

namespace {

constexpr double kNA = std::numeric_limits<double>::quiet_NaN();

double value_or_na(const std::optional<double>& v) { return v ? *v : kNA; }

std::string join_nodes(std::span<const NodeId> nodes) {
  std::string s;
  for (NodeId v : nodes) s += (s.empty() ? "" : ";") + std::to_string(v);
  return s;
}

GameParams game_for(const ExperimentConfig& config, std::size_t rounds, const TrialSeeds& seeds) {
  GameParams p = config.game;
  p.rounds = rounds;
  p.seed = seeds.game;
  return p;
}

std::string pad(std::size_t trial) {
  std::string s = std::to_string(trial);
  return std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s;
}

void linearity_trial(const ExperimentConfig& config, const Graph& graph, TrialRecord& rec) {
  const auto series = simulate(graph, game_for(config, rec.rounds, rec.seeds));
  StrengthOptions so;
  so.burn_in = config.resolve_burn_in(rec.rounds);
  const auto sv = strength(series, so);
  std::vector<std::size_t> k;
  Table table{"strengths.csv", "trial,node,degree,strength", {}};
  for (std::size_t a = 0; a < sv.size(); ++a) {
    k.push_back(graph.degree(sv.nodes[a]));
    table.rows.push_back(std::to_string(rec.trial) + "," + std::to_string(sv.nodes[a]) + "," + std::to_string(k.back()) +
                         "," + format_number(sv.strength[a]));
  }
  const auto fit = fit_linearity(sv.strength, k);
  rec.metrics = {{"beta", fit.beta},
                 {"intercept", fit.intercept},
                 {"r_squared", fit.r_squared},
                 {"scale", fit.scale},
                 {"used", static_cast<double>(fit.used)},
                 {"excluded", static_cast<double>(fit.excluded)}};
  rec.tables.push_back(std::move(table));
}

void reconstruct_trial(const ExperimentConfig& config, const Graph& graph, TrialRecord& rec, bool sweep) {
  SimulationSource source(graph, game_for(config, rec.rounds, rec.seeds), rec.hidden);
  ReconstructOptions options;
  options.strength.burn_in = config.resolve_burn_in(rec.rounds);
  options.exhaustive = config.exhaustive;
  const auto result = reconstruct(source, options);
  const Graph predicted = result.graph();
  const auto counts = confusion(predicted, graph, rec.hidden);
  const auto rates = srel_srnl(counts);
  const auto true_links = hidden_link_counts(graph, rec.hidden);

  std::size_t degree_errors = 0;
  for (NodeId v : result.observable) {
    if (result.reference_degree[v] != graph.degree(v)) ++degree_errors;
  }
  rec.metrics = {{"srel", value_or_na(rates.srel)},
                 {"srnl", value_or_na(rates.srnl)},
                 {"tp", static_cast<double>(counts.tp)},
                 {"fp", static_cast<double>(counts.fp)},
                 {"tn", static_cast<double>(counts.tn)},
                 {"fn", static_cast<double>(counts.fn)},
                 {"degree_errors", static_cast<double>(degree_errors)},
                 {"perturbations", static_cast<double>(result.perturbations())},
                 {"warnings", static_cast<double>(result.warnings.size())},
                 {"hidden_lower", static_cast<double>(result.bounds.lower)},
                 {"hidden_upper", static_cast<double>(result.bounds.upper)}};

  if (config.kind == ExperimentKind::HiddenSingle) {
    std::vector<NodeId> predicted_neighbors;
    for (NodeId v : result.observable) {
      if (result.hidden_links[v] > 0) predicted_neighbors.push_back(v);
    }
    const auto truth = observable_neighbors(graph, rec.hidden.front(), rec.hidden);
    rec.metrics.push_back({"accuracy_one", value_or_na(accuracy_one(predicted_neighbors, truth))});
  }
  if (config.kind == ExperimentKind::HiddenMulti) {
    const double h = static_cast<double>(rec.hidden.size());
    rec.metrics.push_back({"accuracy_two", value_or_na(accuracy_two(result.hidden_links, true_links))});
    rec.metrics.push_back({"hidden_true", h});
    const bool contained = static_cast<double>(result.bounds.lower) <= h && h <= static_cast<double>(result.bounds.upper);
    rec.metrics.push_back({"bounds_contain", contained ? 1.0 : 0.0});
  }

  Table nodes{"nodes.csv",
              "trial,rounds,node,true_degree,reference_degree,perturbed,neighbors_found,hidden_links,true_hidden_links",
              {}};
  for (const auto& r : result.log) {
    nodes.rows.push_back(std::to_string(rec.trial) + "," + std::to_string(rec.rounds) + "," + std::to_string(r.node) + "," +
                         std::to_string(graph.degree(r.node)) + "," + std::to_string(r.reference_degree) + "," +
                         (r.perturbed ? "1" : "0") + "," + std::to_string(r.neighbors_found) + "," +
                         std::to_string(result.hidden_links[r.node]) + "," + std::to_string(true_links[r.node]));
  }
  rec.tables.push_back(std::move(nodes));
  std::string name = "edges/trial_" + pad(rec.trial);
  if (sweep) name += "_T" + std::to_string(rec.rounds);
  rec.graphs.emplace_back(name + ".txt", predicted);
}

void roc_trial(const ExperimentConfig& config, const Graph& graph, TrialRecord& rec) {
  const GameParams params = game_for(config, rec.rounds, rec.seeds);
  const std::size_t burn = config.resolve_burn_in(rec.rounds);
  SimulationSource source(graph, params, rec.hidden);
  ReconstructOptions options;
  options.strength.burn_in = burn;
  options.exhaustive = true;
  const auto result = reconstruct(source, options);
  const auto rates = srel_srnl(confusion(result.graph(), graph, rec.hidden));

  // Pairs no perturbation touched carry no evidence and rank last.
  std::vector<double> dft = result.pair_score;
  for (double& s : dft) {
    if (std::isnan(s)) s = std::numeric_limits<double>::lowest();
  }
  PayoffSeries base = hide_nodes(simulate(graph, params), rec.hidden);
  if (config.baseline_increments) base = increments(base);

  Table points{"roc.csv", "trial,method,fpr,tpr", {}};
  std::vector<std::pair<std::string, double>> aucs;
  auto add_curve = [&](const std::string& method, std::span<const double> scores) {
    const auto curve = roc(scores, graph, rec.hidden);
    for (const auto& p : curve.points) {
      points.rows.push_back(std::to_string(rec.trial) + "," + method + "," + format_number(p.fpr) + "," + format_number(p.tpr));
    }
    aucs.emplace_back(method, curve.auc);
  };
  add_curve("DFT", dft);
  add_curve("CM", correlation_scores(base).scores);
  add_curve("MI", mutual_information_scores(base, config.mi_bins).scores);
  const auto gc = granger_scores(base, config.gc_order);
  add_curve("GC", gc.scores);

  rec.metrics = {{"srel", value_or_na(rates.srel)}, {"srnl", value_or_na(rates.srnl)}};
  bool best = true;
  for (const auto& [method, auc] : aucs) {
    std::string key = "auc_" + method;
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char ch) { return std::tolower(ch); });
    rec.metrics.push_back({key, auc});
    if (method != "DFT" && !(aucs.front().second > auc)) best = false;
  }
  rec.metrics.push_back({"dft_best", best ? 1.0 : 0.0});
  rec.tables.push_back(std::move(points));
}

}  // namespace

std::vector<TrialRecord> run_trial(const ExperimentConfig& config, std::size_t trial) {
  const TrialSeeds seeds = trial_seeds(config.seed, trial);
  const Graph graph = trial_graph(config, seeds);
  const auto hidden = trial_hidden(config, graph, seeds);

  std::vector<std::size_t> lengths;
  if (config.kind == ExperimentKind::LengthSweep) lengths = config.resolve_sweep(graph.node_count());
  else lengths.push_back(config.resolve_rounds(graph.node_count()));

  std::vector<TrialRecord> out;
  for (std::size_t T : lengths) {
    const auto start = std::chrono::steady_clock::now();
    TrialRecord rec;
    rec.trial = trial;
    rec.seeds = seeds;
    rec.nodes = graph.node_count();
    rec.edges = graph.edge_count();
    rec.rounds = T;
    rec.hidden = hidden;
    switch (config.kind) {
      case ExperimentKind::Linearity: linearity_trial(config, graph, rec); break;
      case ExperimentKind::BaselinesRoc: roc_trial(config, graph, rec); break;
      case ExperimentKind::LengthSweep: reconstruct_trial(config, graph, rec, true); break;
      default: reconstruct_trial(config, graph, rec, false); break;
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(rec));
  }
  return out;
}

ModeSplit split_modes(std::span<const double> values, double separation) {
  std::vector<double> x;
  for (double v : values) {
    if (!(v > 0.0)) throw InputError("mode split needs positive values");
    x.push_back(std::log(v));
  }
  if (x.empty()) throw InputError("mode split needs at least one value");
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  auto mean_of = [&](std::size_t a, std::size_t b) { return std::accumulate(x.begin() + a, x.begin() + b, 0.0) / double(b - a); };
  auto ss_of = [&](std::size_t a, std::size_t b, double m) {
    double s = 0.0;
    for (std::size_t i = a; i < b; ++i) s += (x[i] - m) * (x[i] - m);
    return s;
  };

  ModeSplit out;
  out.low = out.high = std::exp(mean_of(0, n));
  out.low_count = n;
  if (n < 2) return out;

  std::size_t best_cut = 0;
  double best_ss = std::numeric_limits<double>::infinity();
  for (std::size_t cut = 1; cut < n; ++cut) {
    const double ss = ss_of(0, cut, mean_of(0, cut)) + ss_of(cut, n, mean_of(cut, n));
    if (ss < best_ss) {
      best_ss = ss;
      best_cut = cut;
    }
  }
  const double lo = mean_of(0, best_cut), hi = mean_of(best_cut, n);
  const double pooled = n > 2 ? std::sqrt(best_ss / double(n - 2)) : 0.0;
  if (hi - lo > separation * pooled && hi - lo > std::log(1.1)) {
    out.modes = 2;
    out.low = std::exp(lo);
    out.high = std::exp(hi);
    out.ratio = out.high / out.low;
    out.low_count = best_cut;
    out.high_count = n - best_cut;
  }
  return out;
}

std::vector<SummaryRow> summarize(std::span<const TrialRecord> records) {
  std::vector<SummaryRow> rows;
  std::map<std::pair<std::string, std::size_t>, std::vector<double>> values;
  for (const auto& r : records) {
    for (const auto& m : r.metrics) {
      auto key = std::make_pair(m.name, r.rounds);
      if (!values.count(key)) rows.push_back({m.name, r.rounds, 0.0, 0.0, 0});
      auto& v = values[key];
      if (!std::isnan(m.value)) v.push_back(m.value);
    }
  }
  for (auto& row : rows) {
    const auto& v = values[{row.metric, row.rounds}];
    row.count = v.size();
    if (v.empty()) {
      row.mean = row.std = kNA;
      continue;
    }
    row.mean = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - row.mean) * (x - row.mean);
    row.std = v.size() > 1 ? std::sqrt(ss / double(v.size() - 1)) : 0.0;
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SummaryRow& a, const SummaryRow& b) { return a.rounds < b.rounds; });
  return rows;
}

ExperimentResult run(const ExperimentConfig& config, std::size_t jobs) {
  ExperimentResult result;
  result.config = config;
  std::vector<std::vector<TrialRecord>> slots(config.trials);
  std::vector<std::string> errors(config.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < config.trials;) {
      try {
        slots[t] = run_trial(config, t);
      } catch (const std::exception& e) {
        errors[t] = "trial " + std::to_string(t) + ": " + e.what();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(jobs, 1, config.trials);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  for (std::size_t t = 0; t < config.trials; ++t) {
    if (result.error.empty() && !errors[t].empty()) result.error = errors[t];
    for (auto& r : slots[t]) result.records.push_back(std::move(r));
  }
  result.summary = summarize(result.records);

  if (config.kind == ExperimentKind::Linearity && !result.records.empty()) {
    std::vector<double> scales;
    for (const auto& r : result.records) scales.push_back(*r.metric("scale"));
    const auto split = split_modes(scales);
    result.tables.push_back({"modes.csv",
                             "modes,low,high,ratio,low_count,high_count",
                             {std::to_string(split.modes) + "," + format_number(split.low) + "," + format_number(split.high) +
                              "," + format_number(split.ratio) + "," + std::to_string(split.low_count) + "," +
                              std::to_string(split.high_count)}});
  }
  return result;
}

std::string format_trials(std::span<const TrialRecord> records) {
  std::vector<std::string> names;
  for (const auto& r : records) {
    for (const auto& m : r.metrics) {
      if (std::find(names.begin(), names.end(), m.name) == names.end()) names.push_back(m.name);
    }
  }
  std::string out = "trial,seed,graph_seed,game_seed,nodes,edges,rounds,hidden";
  for (const auto& n : names) out += "," + n;
  out += "\n";
  for (const auto& r : records) {
    out += std::to_string(r.trial) + "," + std::to_string(r.seeds.trial) + "," + std::to_string(r.seeds.graph) + "," +
           std::to_string(r.seeds.game) + "," + std::to_string(r.nodes) + "," + std::to_string(r.edges) + "," +
           std::to_string(r.rounds) + "," + join_nodes(r.hidden);
    for (const auto& n : names) out += "," + format_number(value_or_na(r.metric(n)));
    out += "\n";
  }
  return out;
}

std::string format_summary(std::span<const SummaryRow> rows) {
  std::string out = "metric,rounds,mean,std,count\n";
  for (const auto& r : rows) {
    out += r.metric + "," + std::to_string(r.rounds) + "," + format_number(r.mean) + "," + format_number(r.std) + "," +
           std::to_string(r.count) + "\n";
  }
  return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write " + path.string());
}

}  // namespace

void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "config.csv", format_config(result.config));
  write_file(dir / "trials.csv", format_trials(result.records));
  write_file(dir / "summary.csv", format_summary(result.summary));

  std::vector<std::string> order;
  std::map<std::string, std::string> files;
  auto merge = [&](const Table& t) {
    auto [it, inserted] = files.try_emplace(t.file, t.header + "\n");
    if (inserted) order.push_back(t.file);
    for (const auto& row : t.rows) it->second += row + "\n";
  };
  for (const auto& r : result.records) {
    for (const auto& t : r.tables) merge(t);
  }
  for (const auto& t : result.tables) merge(t);
  for (const auto& name : order) write_file(dir / name, files[name]);
  for (const auto& r : result.records) {
    for (const auto& [name, g] : r.graphs) write_file(dir / name, format_edge_list(g));
  }
}

}  // namespace netrecon
