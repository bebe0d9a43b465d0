#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace greedygraph {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Canonical index of an unordered pair {u, v}, u < v, in row-major order:
/// (0,1), (0,2), ..., (0,n-1), (1,2), ...
struct EdgeId {
  std::uint64_t value = 0;
  friend auto operator<=>(const EdgeId&, const EdgeId&) = default;
};

class EdgeIndex {
 public:
  explicit EdgeIndex(Vertex n) : n_(n) {}

  Vertex n() const { return n_; }
  std::uint64_t count() const { return static_cast<std::uint64_t>(n_) * (n_ - 1) / 2; }

  /// Accepts either orientation; throws std::invalid_argument on u == v or out of range.
  EdgeId encode(Vertex u, Vertex v) const;
  /// Returns (u, v) with u < v; throws std::out_of_range for id >= count().
  Edge decode(EdgeId id) const;

 private:
  std::uint64_t row_start(std::uint64_t u) const { return u * (2 * std::uint64_t{n_} - u - 1) / 2; }
  Vertex n_;
};

/// Simple undirected graph on vertices 0..n-1 stored as word-packed adjacency rows.
class BitGraph {
 public:
  BitGraph() = default;
  explicit BitGraph(Vertex n);

  Vertex n() const { return n_; }
  std::size_t words_per_row() const { return words_; }
  std::uint64_t edge_count() const { return edge_count_; }

  bool has_edge(Vertex u, Vertex v) const;
  /// Inserts {u, v}; throws on invalid ids, self-loops and duplicates.
  void insert_edge(Vertex u, Vertex v);

  std::span<const std::uint64_t> row(Vertex u) const {
    return {bits_.data() + static_cast<std::size_t>(u) * words_, words_};
  }
  std::uint32_t degree(Vertex u) const;

  /// True iff u and v have a common neighbor. Stops at the first nonzero word.
  bool shares_neighbor(Vertex u, Vertex v) const;
  std::uint32_t common_neighbors(Vertex u, Vertex v) const;

  /// All edges as (u, v), u < v, sorted lexicographically.
  std::vector<Edge> edges() const;
  std::vector<Vertex> neighbors(Vertex u) const;

  bool is_triangle_free() const;
  std::uint64_t triangle_count() const;

  /// Graph with vertex u renamed to perm[u]; perm must be a permutation of 0..n-1.
  BitGraph relabeled(std::span<const Vertex> perm) const;

  friend bool operator==(const BitGraph&, const BitGraph&) = default;

 private:
  void check_pair(Vertex u, Vertex v) const;
  std::uint64_t* mutable_row(Vertex u) { return bits_.data() + static_cast<std::size_t>(u) * words_; }

  Vertex n_ = 0;
  std::size_t words_ = 0;
  std::uint64_t edge_count_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// The process state: the current triangle-free graph TF_i together with the
/// ledger of every edge birthed so far (B_{<=i}). TF_i is a subgraph of the ledger.
class EvolvingGraph {
 public:
  EvolvingGraph() = default;
  explicit EvolvingGraph(Vertex n) : graph_(n), birthed_(n) {}

  Vertex n() const { return graph_.n(); }
  const BitGraph& graph() const { return graph_; }
  const BitGraph& birthed() const { return birthed_; }
  std::uint64_t edge_count() const { return graph_.edge_count(); }
  std::uint64_t birthed_count() const { return birthed_.edge_count(); }

  /// True iff adding {u, v} would create a triangle, i.e. u and v share a neighbor.
  bool would_close_triangle(Vertex u, Vertex v) const;

  /// Adds {u, v} unless it closes a triangle; returns whether it was added.
  /// The birth ledger is left to the caller. Throws std::logic_error if the
  /// edge is already present.
  bool add_edge_if_open(Vertex u, Vertex v);

  void mark_birthed(Vertex u, Vertex v) { birthed_.insert_edge(u, v); }
  bool is_birthed(Vertex u, Vertex v) const { return birthed_.has_edge(u, v); }

  /// Inserts {u, v} and marks it birthed with no triangle check. Test support
  /// for building arbitrary (even non-triangle-free) states.
  void force_add_edge(Vertex u, Vertex v);

  bool audit_triangle_free() const { return graph_.is_triangle_free(); }

  friend bool operator==(const EvolvingGraph&, const EvolvingGraph&) = default;

 private:
  BitGraph graph_;
  BitGraph birthed_;
};

/// Writes "u v" lines, one edge per line, sorted, u < v.
void write_edge_list(std::ostream& out, const BitGraph& graph);

}  // namespace greedygraph
