#include "greedygraph/process.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "greedygraph/patterns.hpp"
#include "greedygraph/rng.hpp"

namespace greedygraph {
namespace {

struct Birth {
  std::uint64_t time;
  std::uint64_t id;  // EdgeId value; breaks ties
  Vertex u;
  Vertex v;
  bool operator<(const Birth& other) const { return time != other.time ? time < other.time : id < other.id; }
};

void check_n(std::uint64_t n) {
  if (n < 3) throw std::invalid_argument("process: n must be >= 3");
  if (n > 0xFFFFFFFFULL) throw std::invalid_argument("process: n too large");
}

std::uint64_t insert_in_order(std::vector<Birth>& births, EvolvingGraph& g) {
  std::sort(births.begin(), births.end());
  std::uint64_t added = 0;
  for (const Birth& b : births) {
    g.mark_birthed(b.u, b.v);
    if (g.add_edge_if_open(b.u, b.v)) ++added;
  }
  return added;
}

}  // namespace

std::string to_string(ProcessMode mode) { return mode == ProcessMode::kExact ? "exact" : "rounds"; }

RunTrace run_exact(const ProcessParams& params) {
  const std::uint64_t n = params.ctx.n();
  check_n(n);
  const auto vertices = static_cast<Vertex>(n);
  auto rng = StreamRng::for_stream(params.seed, params.trial, 0, StreamPurpose::kExact);

  bool keep_all = !params.cutoff.has_value() || *params.cutoff >= 1.0;
  std::uint64_t threshold = 0;
  if (!keep_all) {
    const double p = std::max(0.0, *params.cutoff);
    threshold = static_cast<std::uint64_t>(std::ldexp(p, 64));
  }

  std::vector<Birth> births;
  births.reserve(keep_all ? n * (n - 1) / 2 : static_cast<std::size_t>(n * (n - 1) / 2 * (*params.cutoff) * 1.1 + 16));
  std::uint64_t id = 0;
  for (Vertex u = 0; u < vertices; ++u) {
    for (Vertex v = u + 1; v < vertices; ++v, ++id) {
      const std::uint64_t t = rng();
      if (keep_all || t < threshold) births.push_back({t, id, u, v});
    }
  }

  RunTrace trace;
  trace.final_graph = EvolvingGraph(vertices);
  if (params.record_snapshots) trace.snapshots.push_back(trace.final_graph);
  const std::uint64_t birthed = births.size();
  const std::uint64_t added = insert_in_order(births, trace.final_graph);
  trace.per_round.push_back({1, birthed, added, trace.final_graph.edge_count()});
  if (params.record_snapshots) trace.snapshots.push_back(trace.final_graph);
  return trace;
}

RunTrace run_rounds(const ProcessParams& params) {
  const RoundContext& ctx = params.ctx;
  const std::uint64_t n = ctx.n();
  check_n(n);
  const auto vertices = static_cast<Vertex>(n);
  const EdgeIndex index(vertices);
  const double q = ctx.delta() / std::sqrt(static_cast<double>(n));

  RunTrace trace;
  trace.final_graph = EvolvingGraph(vertices);
  EvolvingGraph& g = trace.final_graph;
  if (params.record_snapshots) trace.snapshots.push_back(g);

  std::vector<Birth> births;
  for (std::uint64_t round = 1; round <= ctx.total_rounds(); ++round) {
    auto birth_rng = StreamRng::for_stream(params.seed, params.trial, round, StreamPurpose::kBirth);
    auto order_rng = StreamRng::for_stream(params.seed, params.trial, round, StreamPurpose::kOrder);
    births.clear();
    // Selecting every index with probability q and dropping those already
    // birthed selects each unbirthed edge independently with probability q.
    for_each_bernoulli(birth_rng, index.count(), q, [&](std::uint64_t id) {
      const auto [u, v] = index.decode(EdgeId{id});
      if (!g.is_birthed(u, v)) births.push_back({0, id, u, v});
    });
    for (Birth& b : births) b.time = order_rng();
    const std::uint64_t birthed = births.size();
    const std::uint64_t added = insert_in_order(births, g);
    trace.per_round.push_back({round, birthed, added, g.edge_count()});
    if (params.record_snapshots) trace.snapshots.push_back(g);
  }
  return trace;
}

RunTrace run_process(const ProcessParams& params) {
  return params.mode == ProcessMode::kExact ? run_exact(params) : run_rounds(params);
}

double equivalent_cutoff(const RoundContext& ctx) {
  const double q = ctx.delta() / std::sqrt(static_cast<double>(ctx.n()));
  return -std::expm1(static_cast<double>(ctx.total_rounds()) * std::log1p(-q));
}

BitGraph replay_ordering(Vertex n, const std::vector<Edge>& ordering) {
  EvolvingGraph g(n);
  for (const auto& [u, v] : ordering) {
    g.mark_birthed(u, v);
    g.add_edge_if_open(u, v);
  }
  return g.graph();
}

std::map<std::uint32_t, double> OracleResult::edge_count_distribution() const {
  std::map<std::uint32_t, double> out;
  for (const auto& o : outcomes) out[o.edge_count] += o.probability;
  return out;
}

std::map<std::string, double> OracleResult::class_distribution() const {
  std::map<std::string, double> out;
  for (const auto& o : outcomes) out[o.graph_class] += o.probability;
  return out;
}

OracleResult exhaustive_oracle(std::uint32_t n) {
  if (n < 3 || n > 5) throw std::invalid_argument("exhaustive_oracle: n must be 3, 4 or 5");
  const EdgeIndex index(n);
  const auto m = static_cast<std::uint32_t>(index.count());
  std::vector<Edge> edge_of(m);
  for (std::uint32_t id = 0; id < m; ++id) edge_of[id] = index.decode(EdgeId{id});

  // Final graphs keyed by edge bitmask; adjacency as per-vertex bitmasks.
  std::vector<std::uint64_t> final_counts(std::size_t{1} << m, 0);
  std::array<std::uint8_t, 10> order{};
  std::iota(order.begin(), order.begin() + m, std::uint8_t{0});
  std::uint64_t total = 0;
  do {
    std::array<std::uint8_t, 5> adj{};
    std::uint32_t mask = 0;
    for (std::uint32_t step = 0; step < m; ++step) {
      const auto [u, v] = edge_of[order[step]];
      if (adj[u] & adj[v]) continue;
      adj[u] |= static_cast<std::uint8_t>(1U << v);
      adj[v] |= static_cast<std::uint8_t>(1U << u);
      mask |= 1U << order[step];
    }
    ++final_counts[mask];
    ++total;
  } while (std::next_permutation(order.begin(), order.begin() + m));

  std::map<std::pair<std::uint32_t, std::string>, std::uint64_t> by_class;
  for (std::uint32_t mask = 0; mask < final_counts.size(); ++mask) {
    if (final_counts[mask] == 0) continue;
    std::vector<Edge> edges;
    for (std::uint32_t id = 0; id < m; ++id) {
      if ((mask >> id) & 1U) edges.push_back(edge_of[id]);
    }
    const auto edge_count = static_cast<std::uint32_t>(edges.size());
    by_class[{edge_count, isomorphism_class_name(n, edges)}] += final_counts[mask];
  }

  OracleResult result;
  result.n = n;
  result.total_orderings = total;
  for (const auto& [key, count] : by_class) {
    result.outcomes.push_back(
        {key.first, key.second, count, static_cast<double>(count) / static_cast<double>(total)});
  }
  return result;
}

nlohmann::json params_to_json(const ProcessParams& params) {
  nlohmann::json j = {
      {"n", params.ctx.n()},
      {"eps", params.ctx.eps()},
      {"k", params.ctx.k()},
      {"delta", params.ctx.delta()},
      {"rounds", params.ctx.total_rounds()},
      {"seed", params.seed},
      {"trial", params.trial},
      {"mode", to_string(params.mode)},
  };
  j["cutoff"] = params.cutoff ? nlohmann::json(*params.cutoff) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json trace_to_json(const ProcessParams& params, const RunTrace& trace) {
  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& r : trace.per_round) {
    rounds.push_back({{"i", r.round}, {"birthed", r.birthed}, {"added", r.added}, {"total_edges", r.total_edges}});
  }
  return {{"params", params_to_json(params)}, {"per_round", rounds}, {"final_edges", trace.final_edges()}};
}

nlohmann::json oracle_to_json(const OracleResult& result) {
  nlohmann::json outcomes = nlohmann::json::array();
  for (const auto& o : result.outcomes) {
    outcomes.push_back({{"edges", o.edge_count},
                        {"class", o.graph_class},
                        {"orderings", o.orderings},
                        {"probability", o.probability}});
  }
  nlohmann::json edge_dist = nlohmann::json::object();
  for (const auto& [edges, p] : result.edge_count_distribution()) edge_dist[std::to_string(edges)] = p;
  return {{"n", result.n},
          {"total_orderings", result.total_orderings},
          {"outcomes", outcomes},
          {"edge_count_distribution", edge_dist}};
}

}  // namespace greedygraph
