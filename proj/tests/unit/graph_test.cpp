#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "greedygraph/graph.hpp"
#include "greedygraph/predictor.hpp"
#include "greedygraph/process.hpp"

using namespace greedygraph;

namespace {

BitGraph random_graph(Vertex n, double p, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution coin(p);
  BitGraph g(n);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (coin(gen)) g.insert_edge(u, v);
    }
  }
  return g;
}

// O(n^3) triangle scan straight from the adjacency predicate.
std::uint64_t brute_triangles(const BitGraph& g) {
  std::uint64_t t = 0;
  for (Vertex a = 0; a < g.n(); ++a)
    for (Vertex b = a + 1; b < g.n(); ++b)
      for (Vertex c = b + 1; c < g.n(); ++c) t += g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c);
  return t;
}

}  // namespace

TEST(EdgeIndex, RoundTripExhaustiveUpTo2000) {
  for (Vertex n : {2U, 3U, 7U, 64U, 65U, 129U, 2000U}) {
    const EdgeIndex index(n);
    std::uint64_t expected = 0;
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = u + 1; v < n; ++v, ++expected) {
        const EdgeId id = index.encode(u, v);
        ASSERT_EQ(id.value, expected);
        ASSERT_EQ(index.decode(id), Edge(u, v));
      }
    }
    EXPECT_EQ(expected, index.count());
  }
}

TEST(EdgeIndex, RoundTripSampledAtLargeN) {
  std::mt19937_64 gen(7);
  for (Vertex n : {100000U, 3000000U}) {
    const EdgeIndex index(n);
    std::uniform_int_distribution<std::uint64_t> pick(0, index.count() - 1);
    for (int t = 0; t < 100000; ++t) {
      const EdgeId id{pick(gen)};
      const auto [u, v] = index.decode(id);
      ASSERT_LT(u, v);
      ASSERT_EQ(index.encode(u, v), id);
    }
    EXPECT_EQ(index.decode(EdgeId{index.count() - 1}), Edge(n - 2, n - 1));
  }
}

TEST(EdgeIndex, RejectsInvalid) {
  const EdgeIndex index(10);
  EXPECT_THROW(index.encode(3, 3), std::invalid_argument);
  EXPECT_THROW(index.encode(3, 10), std::invalid_argument);
  EXPECT_THROW(index.decode(EdgeId{45}), std::out_of_range);
  EXPECT_EQ(index.encode(5, 2), index.encode(2, 5));
}

TEST(EvolvingGraph, WouldCloseTriangleBasics) {
  EvolvingGraph g(5);
  EXPECT_FALSE(g.would_close_triangle(0, 1));
  g.force_add_edge(0, 2);
  g.force_add_edge(2, 1);
  EXPECT_TRUE(g.would_close_triangle(0, 1));
  EXPECT_FALSE(g.would_close_triangle(0, 3));
  EXPECT_THROW(g.would_close_triangle(0, 9), std::invalid_argument);
}

TEST(EvolvingGraph, WouldCloseTriangleMatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Vertex n = 70;
    const BitGraph base = random_graph(n, 0.08, seed);
    EvolvingGraph g(n);
    for (const auto& [u, v] : base.edges()) g.force_add_edge(u, v);
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = u + 1; v < n; ++v) {
        if (base.has_edge(u, v)) continue;
        bool common = false;
        for (Vertex w = 0; w < n && !common; ++w) {
          if (w != u && w != v) common = base.has_edge(u, w) && base.has_edge(v, w);
        }
        ASSERT_EQ(g.would_close_triangle(u, v), common) << u << "," << v;
      }
    }
  }
}

TEST(EvolvingGraph, AddEdgeIfOpen) {
  EvolvingGraph g(4);
  g.mark_birthed(0, 1);
  EXPECT_TRUE(g.add_edge_if_open(0, 1));
  g.mark_birthed(1, 2);
  EXPECT_TRUE(g.add_edge_if_open(1, 2));
  const EvolvingGraph before = g;
  g.mark_birthed(0, 2);
  EXPECT_FALSE(g.add_edge_if_open(0, 2));
  EXPECT_EQ(g.graph(), before.graph());  // rejected edge leaves adjacency bit-identical
  EXPECT_TRUE(g.is_birthed(0, 2));
  EXPECT_THROW(g.add_edge_if_open(0, 1), std::logic_error);
  EXPECT_TRUE(g.audit_triangle_free());
}

TEST(EvolvingGraph, ReplayOfFixedOrderingMatchesHandSimulation) {
  // n = 6, ordering chosen so that several edges are rejected.
  const std::vector<Edge> order = {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {2, 4}, {4, 5},
                                   {0, 5}, {1, 5}, {0, 3}, {1, 3}, {3, 5}, {0, 4}, {1, 4}, {2, 5}};
  // By hand (x = rejected, common neighbor in parentheses): 01, 12, 02 x(1), 23, 34,
  // 24 x(3), 45, 05, 15 x(0), 03, 13 x(0), 35 x(4), 04 x(3), 14, 25.
  const std::vector<Edge> expected = {{0, 1}, {0, 3}, {0, 5}, {1, 2}, {1, 4}, {2, 3}, {2, 5}, {3, 4}, {4, 5}};
  const BitGraph g = replay_ordering(6, order);
  EXPECT_EQ(g.edges(), expected);
  EXPECT_TRUE(g.is_triangle_free());
}

TEST(BitGraph, TriangleCountMatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const BitGraph g = random_graph(90, 0.15, 100 + seed);
    EXPECT_EQ(g.triangle_count(), brute_triangles(g));
    EXPECT_EQ(g.is_triangle_free(), brute_triangles(g) == 0);
  }
}

TEST(BitGraph, AuditDetectsInjectedTriangle) {
  EvolvingGraph g(6);
  g.force_add_edge(0, 1);
  g.force_add_edge(1, 2);
  EXPECT_TRUE(g.audit_triangle_free());
  g.force_add_edge(0, 2);
  EXPECT_FALSE(g.audit_triangle_free());
}

TEST(BitGraph, GnmAtThreeHalvesPowerHasTriangles) {
  const Vertex n = 200;
  const auto m = static_cast<std::uint64_t>(std::pow(n, 1.5));
  int with_triangle = 0;
  for (std::uint64_t t = 0; t < 100; ++t) with_triangle += sample_gnm(n, m, 99, t).is_triangle_free() ? 0 : 1;
  EXPECT_GE(with_triangle, 99);
}

TEST(BitGraph, InsertValidation) {
  BitGraph g(5);
  g.insert_edge(1, 3);
  EXPECT_TRUE(g.has_edge(3, 1));
  EXPECT_THROW(g.insert_edge(3, 1), std::logic_error);
  EXPECT_THROW(g.insert_edge(2, 2), std::invalid_argument);
  EXPECT_THROW(g.insert_edge(2, 5), std::invalid_argument);
  EXPECT_EQ(g.degree(1), 1U);
  EXPECT_EQ(g.edge_count(), 1U);
}

TEST(BitGraph, RelabelPreservesStructure) {
  const BitGraph g = random_graph(40, 0.2, 5);
  std::vector<Vertex> perm(40);
  std::iota(perm.begin(), perm.end(), 0U);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(3));
  const BitGraph h = g.relabeled(perm);
  EXPECT_EQ(h.edge_count(), g.edge_count());
  EXPECT_EQ(h.triangle_count(), g.triangle_count());
  for (const auto& [u, v] : g.edges()) EXPECT_TRUE(h.has_edge(perm[u], perm[v]));
}

TEST(BitGraph, EdgeListExportIsSortedPairs) {
  BitGraph g(70);
  g.insert_edge(65, 3);
  g.insert_edge(0, 69);
  g.insert_edge(3, 4);
  std::ostringstream out;
  write_edge_list(out, g);
  EXPECT_EQ(out.str(), "0 69\n3 4\n3 65\n");
}
