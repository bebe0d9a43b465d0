#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "greedygraph/graph.hpp"
#include "greedygraph/numerics.hpp"
#include "json.hpp"

namespace greedygraph {

enum class ProcessMode { kExact, kRounds };

std::string to_string(ProcessMode mode);

/// Everything that determines a run. (seed, trial) select the random streams,
/// so a run is bit-reproducible from these fields alone.
struct ProcessParams {
  RoundContext ctx;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  ProcessMode mode = ProcessMode::kRounds;
  bool record_snapshots = false;
  /// Birthtime cutoff p for the one-shot process; unset runs K_n to exhaustion.
  std::optional<double> cutoff;
};

struct RoundRecord {
  std::uint64_t round = 0;
  std::uint64_t birthed = 0;  // |B_i|
  std::uint64_t added = 0;
  std::uint64_t total_edges = 0;  // |TF_i|
};

struct RunTrace {
  std::vector<RoundRecord> per_round;
  EvolvingGraph final_graph;
  /// snapshots[i] is the state after round i; snapshots[0] is the empty graph.
  std::vector<EvolvingGraph> snapshots;

  std::uint64_t final_edges() const { return final_graph.edge_count(); }
};

/// One-shot process: i.i.d. 64-bit birthtimes on every edge of K_n (ties
/// broken by EdgeId), edges taken in birth order and kept unless they close
/// a triangle. With a cutoff only births below p are processed, giving TF(n, p).
RunTrace run_exact(const ProcessParams& params);

/// Round-based process through round I: round r births each not-yet-birthed
/// edge with probability delta / sqrt(n) and inserts the new births greedily
/// in order of fresh birthtimes.
RunTrace run_rounds(const ProcessParams& params);

RunTrace run_process(const ProcessParams& params);

/// 1 - (1 - delta n^{-1/2})^I: the cutoff at which TF(n, p) has the law of TF_I.
double equivalent_cutoff(const RoundContext& ctx);

struct OracleOutcome {
  std::uint32_t edge_count = 0;
  std::string graph_class;  // isomorphism class name, e.g. "C4"
  std::uint64_t orderings = 0;
  double probability = 0.0;
};

struct OracleResult {
  std::uint32_t n = 0;
  std::uint64_t total_orderings = 0;
  std::vector<OracleOutcome> outcomes;  // sorted by (edge_count, graph_class)

  std::map<std::uint32_t, double> edge_count_distribution() const;
  std::map<std::string, double> class_distribution() const;
};

/// Runs the process on every one of the C(n,2)! edge orderings of K_n and
/// returns the exact law of the final graph. Accepts n in {3, 4, 5}; throws
/// std::invalid_argument otherwise.
OracleResult exhaustive_oracle(std::uint32_t n);

/// Final graph of the process on K_n for one explicit edge ordering.
BitGraph replay_ordering(Vertex n, const std::vector<Edge>& ordering);

nlohmann::json params_to_json(const ProcessParams& params);
/// {params, per_round: [{i, birthed, added, total_edges}], final_edges}
nlohmann::json trace_to_json(const ProcessParams& params, const RunTrace& trace);
nlohmann::json oracle_to_json(const OracleResult& result);

}  // namespace greedygraph
