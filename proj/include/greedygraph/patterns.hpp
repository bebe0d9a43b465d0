#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "greedygraph/graph.hpp"

namespace greedygraph {

/// Largest pattern for which automorphisms and subgraph structure are
/// computed by brute force.
inline constexpr std::uint32_t kMaxPatternVertices = 8;

/// A small fixed graph F with its derived metadata.
class PatternGraph {
 public:
  /// Builds and validates the pattern; computes aut, density, balancedness and
  /// triangle-freeness. Throws std::invalid_argument on duplicate edges,
  /// self-loops, out-of-range ids or more than kMaxPatternVertices vertices.
  static PatternGraph from_edges(std::string name, std::uint32_t vertices, std::vector<Edge> edges);

  const std::string& name() const { return name_; }
  std::uint32_t vertex_count() const { return vertices_; }
  std::uint32_t edge_count() const { return static_cast<std::uint32_t>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::uint64_t aut() const { return aut_; }
  double density() const { return static_cast<double>(edges_.size()) / vertices_; }
  bool balanced() const { return balanced_; }
  bool triangle_free() const { return triangle_free_; }

  BitGraph to_graph() const;

 private:
  std::string name_;
  std::uint32_t vertices_ = 0;
  std::vector<Edge> edges_;
  std::uint64_t aut_ = 1;
  bool balanced_ = false;
  bool triangle_free_ = true;
};

/// |Aut(F)| by enumerating all v_F! vertex permutations.
std::uint64_t automorphism_count(std::uint32_t vertices, const std::vector<Edge>& edges);

/// Built-in catalog: K2, K3, P3, P4, C4, C5, C6, K13, K22, K23, K14 and
/// stars S<k>. Returns nullopt for unknown names.
std::optional<PatternGraph> catalog_pattern(std::string_view name);
std::vector<std::string> catalog_names();

/// Parses "u v" lines ('#' comments allowed); the vertex count is max id + 1.
PatternGraph parse_pattern(std::istream& in, std::string name);

/// Catalog name, or else a path to an edge-list file.
PatternGraph load_pattern(const std::string& name_or_path);

/// Thrown when a count would exceed the counting complexity guard.
class ComplexityGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of (not necessarily induced) subgraphs of host isomorphic to F:
/// labeled embeddings divided by aut(F). Uses O(sum deg^2) fast paths for
/// P3 and C4. Guard: v_F <= 4 on any host, v_F <= 6 on hosts with at most
/// 5000 vertices, v_F <= 8 on hosts with at most 64; otherwise throws
/// ComplexityGuardError.
std::uint64_t count_copies(const BitGraph& host, const PatternGraph& pattern);

/// Labeled embeddings (injective homomorphisms F -> host) by backtracking on a
/// degree-descending vertex order; no fast paths, no guard.
std::uint64_t count_embeddings(const BitGraph& host, const PatternGraph& pattern);

std::uint64_t count_c4(const BitGraph& host);
std::uint64_t count_p3(const BitGraph& host);

struct VarianceMargin {
  double margin;           // min over H of v_H - (1/2 - eps) e_H
  double max_density;      // max over H of e_H / v_H
  std::uint32_t worst_vertices;
  std::uint32_t worst_edges;
};

/// Enumerates every subgraph H of F (vertex subset, then any subset of its
/// induced edges) with e_H >= 1. A positive margin means each overlap class
/// contributes o(E[Y_F]^2) to Var(Y_F) at the exponent level.
VarianceMargin variance_margin(const PatternGraph& pattern, double eps);

/// Canonical code of a graph with n <= 8 vertices: the smallest edge bitmask
/// (bit = EdgeIndex id) over all relabelings. Isomorphic graphs share a code.
std::uint64_t canonical_code(std::uint32_t n, const std::vector<Edge>& edges);

/// A catalog name for the isomorphism class of (n, edges) when one matches
/// (isolated vertices ignored), else "G<code>".
std::string isomorphism_class_name(std::uint32_t n, const std::vector<Edge>& edges);

}  // namespace greedygraph
