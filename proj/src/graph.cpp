#include "greedygraph/graph.hpp"

#include <bit>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace greedygraph {

EdgeId EdgeIndex::encode(Vertex u, Vertex v) const {
  if (u == v) throw std::invalid_argument("EdgeIndex: self-loop {" + std::to_string(u) + "}");
  if (u >= n_ || v >= n_) throw std::invalid_argument("EdgeIndex: vertex out of range");
  if (u > v) std::swap(u, v);
  return EdgeId{row_start(u) + (v - u - 1)};
}

Edge EdgeIndex::decode(EdgeId id) const {
  if (id.value >= count()) throw std::out_of_range("EdgeIndex: id out of range");
  // Solve row_start(u) <= id < row_start(u + 1) from the quadratic, then fix rounding.
  const double b = 2.0 * n_ - 1.0;
  const double disc = b * b - 8.0 * static_cast<double>(id.value);
  auto u = static_cast<std::uint64_t>(std::max(0.0, std::floor((b - std::sqrt(std::max(0.0, disc))) / 2.0)));
  if (u > n_ - 2) u = n_ - 2;
  while (u > 0 && row_start(u) > id.value) --u;
  while (u + 1 < n_ - 1 && row_start(u + 1) <= id.value) ++u;
  const std::uint64_t v = id.value - row_start(u) + u + 1;
  return {static_cast<Vertex>(u), static_cast<Vertex>(v)};
}

BitGraph::BitGraph(Vertex n) : n_(n), words_((n + 63) / 64), bits_(static_cast<std::size_t>(n) * words_, 0) {}

void BitGraph::check_pair(Vertex u, Vertex v) const {
  if (u >= n_ || v >= n_) {
    throw std::invalid_argument("vertex out of range: {" + std::to_string(u) + ", " + std::to_string(v) +
                                "} with n = " + std::to_string(n_));
  }
  if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
}

bool BitGraph::has_edge(Vertex u, Vertex v) const {
  check_pair(u, v);
  return (row(u)[v / 64] >> (v % 64)) & 1U;
}

void BitGraph::insert_edge(Vertex u, Vertex v) {
  if (has_edge(u, v)) {
    throw std::logic_error("edge {" + std::to_string(u) + ", " + std::to_string(v) + "} already present");
  }
  mutable_row(u)[v / 64] |= std::uint64_t{1} << (v % 64);
  mutable_row(v)[u / 64] |= std::uint64_t{1} << (u % 64);
  ++edge_count_;
}

std::uint32_t BitGraph::degree(Vertex u) const {
  std::uint32_t d = 0;
  for (std::uint64_t w : row(u)) d += static_cast<std::uint32_t>(std::popcount(w));
  return d;
}

bool BitGraph::shares_neighbor(Vertex u, Vertex v) const {
  check_pair(u, v);
  const auto a = row(u);
  const auto b = row(v);
  for (std::size_t i = 0; i < words_; ++i) {
    if (a[i] & b[i]) return true;
  }
  return false;
}

std::uint32_t BitGraph::common_neighbors(Vertex u, Vertex v) const {
  check_pair(u, v);
  const auto a = row(u);
  const auto b = row(v);
  std::uint32_t c = 0;
  for (std::size_t i = 0; i < words_; ++i) c += static_cast<std::uint32_t>(std::popcount(a[i] & b[i]));
  return c;
}

std::vector<Vertex> BitGraph::neighbors(Vertex u) const {
  std::vector<Vertex> out;
  const auto r = row(u);
  for (std::size_t i = 0; i < words_; ++i) {
    for (std::uint64_t w = r[i]; w != 0; w &= w - 1) {
      out.push_back(static_cast<Vertex>(i * 64 + std::countr_zero(w)));
    }
  }
  return out;
}

std::vector<Edge> BitGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (Vertex u = 0; u < n_; ++u) {
    const auto r = row(u);
    for (std::size_t i = (u + 1) / 64; i < words_; ++i) {
      std::uint64_t w = r[i];
      if (i == (u + 1) / 64) w &= ~std::uint64_t{0} << ((u + 1) % 64);
      for (; w != 0; w &= w - 1) out.emplace_back(u, static_cast<Vertex>(i * 64 + std::countr_zero(w)));
    }
  }
  return out;
}

bool BitGraph::is_triangle_free() const {
  for (const auto& [u, v] : edges()) {
    if (shares_neighbor(u, v)) return false;
  }
  return true;
}

std::uint64_t BitGraph::triangle_count() const {
  std::uint64_t total = 0;
  for (const auto& [u, v] : edges()) total += common_neighbors(u, v);
  return total / 3;
}

BitGraph BitGraph::relabeled(std::span<const Vertex> perm) const {
  if (perm.size() != n_) throw std::invalid_argument("relabeled: permutation has wrong size");
  BitGraph out(n_);
  for (const auto& [u, v] : edges()) out.insert_edge(perm[u], perm[v]);
  return out;
}

bool EvolvingGraph::would_close_triangle(Vertex u, Vertex v) const { return graph_.shares_neighbor(u, v); }

bool EvolvingGraph::add_edge_if_open(Vertex u, Vertex v) {
  if (graph_.has_edge(u, v)) {
    throw std::logic_error("add_edge_if_open: edge {" + std::to_string(u) + ", " + std::to_string(v) +
                           "} already present");
  }
  if (graph_.shares_neighbor(u, v)) return false;
  graph_.insert_edge(u, v);
  return true;
}

void EvolvingGraph::force_add_edge(Vertex u, Vertex v) {
  graph_.insert_edge(u, v);
  if (!birthed_.has_edge(u, v)) birthed_.insert_edge(u, v);
}

void write_edge_list(std::ostream& out, const BitGraph& graph) {
  for (const auto& [u, v] : graph.edges()) out << u << ' ' << v << '\n';
}

}  // namespace greedygraph
