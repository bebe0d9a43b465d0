#include "greedygraph/patterns.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace greedygraph {
namespace {

std::vector<Edge> normalized(std::uint32_t vertices, std::vector<Edge> edges) {
  std::set<Edge> seen;
  for (auto& [u, v] : edges) {
    if (u >= vertices || v >= vertices) throw std::invalid_argument("pattern edge uses a vertex out of range");
    if (u == v) throw std::invalid_argument("pattern has a self-loop");
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second) throw std::invalid_argument("pattern has a duplicate edge");
  }
  return {seen.begin(), seen.end()};
}

std::array<std::uint32_t, kMaxPatternVertices> adjacency_masks(const std::vector<Edge>& edges) {
  std::array<std::uint32_t, kMaxPatternVertices> adj{};
  for (const auto& [u, v] : edges) {
    adj[u] |= 1U << v;
    adj[v] |= 1U << u;
  }
  return adj;
}

std::vector<Edge> cycle(std::uint32_t n) {
  std::vector<Edge> e;
  for (std::uint32_t i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return e;
}

std::vector<Edge> path(std::uint32_t n) {
  std::vector<Edge> e;
  for (std::uint32_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return e;
}

std::vector<Edge> complete_bipartite(std::uint32_t a, std::uint32_t b) {
  std::vector<Edge> e;
  for (std::uint32_t i = 0; i < a; ++i) {
    for (std::uint32_t j = 0; j < b; ++j) e.emplace_back(i, a + j);
  }
  return e;
}

bool is_c4_shape(const PatternGraph& p) {
  if (p.vertex_count() != 4 || p.edge_count() != 4) return false;
  std::array<int, 4> deg{};
  for (const auto& [u, v] : p.edges()) ++deg[u], ++deg[v];
  return std::all_of(deg.begin(), deg.end(), [](int d) { return d == 2; });
}

bool is_p3_shape(const PatternGraph& p) { return p.vertex_count() == 3 && p.edge_count() == 2; }

}  // namespace

std::uint64_t automorphism_count(std::uint32_t vertices, const std::vector<Edge>& edges) {
  if (vertices > kMaxPatternVertices) throw std::invalid_argument("automorphism_count: more than 8 vertices");
  const auto adj = adjacency_masks(edges);
  std::vector<std::uint32_t> perm(vertices);
  std::iota(perm.begin(), perm.end(), 0U);
  std::uint64_t count = 0;
  do {
    bool preserved = true;
    for (const auto& [u, v] : edges) {
      if (!((adj[perm[u]] >> perm[v]) & 1U)) {
        preserved = false;
        break;
      }
    }
    if (preserved) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

PatternGraph PatternGraph::from_edges(std::string name, std::uint32_t vertices, std::vector<Edge> edges) {
  if (vertices == 0) throw std::invalid_argument("pattern must have at least one vertex");
  if (vertices > kMaxPatternVertices) throw std::invalid_argument("pattern has more than 8 vertices");
  PatternGraph p;
  p.name_ = std::move(name);
  p.vertices_ = vertices;
  p.edges_ = normalized(vertices, std::move(edges));
  p.aut_ = automorphism_count(vertices, p.edges_);

  const auto adj = adjacency_masks(p.edges_);
  p.triangle_free_ = std::none_of(p.edges_.begin(), p.edges_.end(),
                                  [&](const Edge& e) { return (adj[e.first] & adj[e.second]) != 0; });

  // Balanced iff e_F / v_F >= e_H / v_H for every subgraph; for a fixed vertex
  // set the induced edges maximize e_H, so vertex subsets suffice.
  const auto e_f = static_cast<std::uint64_t>(p.edges_.size());
  p.balanced_ = true;
  for (std::uint32_t mask = 1; mask < (1U << vertices); ++mask) {
    std::uint64_t e_h = 0;
    for (const auto& [u, v] : p.edges_) {
      if (((mask >> u) & 1U) && ((mask >> v) & 1U)) ++e_h;
    }
    if (e_f * std::popcount(mask) < e_h * vertices) {
      p.balanced_ = false;
      break;
    }
  }
  return p;
}

BitGraph PatternGraph::to_graph() const {
  BitGraph g(vertices_);
  for (const auto& [u, v] : edges_) g.insert_edge(u, v);
  return g;
}

std::optional<PatternGraph> catalog_pattern(std::string_view name) {
  if (name == "K2") return PatternGraph::from_edges("K2", 2, {{0, 1}});
  if (name == "K3") return PatternGraph::from_edges("K3", 3, cycle(3));
  if (name == "P3") return PatternGraph::from_edges("P3", 3, path(3));
  if (name == "P4") return PatternGraph::from_edges("P4", 4, path(4));
  if (name == "C4") return PatternGraph::from_edges("C4", 4, cycle(4));
  if (name == "C5") return PatternGraph::from_edges("C5", 5, cycle(5));
  if (name == "C6") return PatternGraph::from_edges("C6", 6, cycle(6));
  if (name == "K13") return PatternGraph::from_edges("K13", 4, complete_bipartite(1, 3));
  if (name == "K14") return PatternGraph::from_edges("K14", 5, complete_bipartite(1, 4));
  if (name == "K22") return PatternGraph::from_edges("K22", 4, complete_bipartite(2, 2));
  if (name == "K23") return PatternGraph::from_edges("K23", 5, complete_bipartite(2, 3));
  if (name.size() >= 2 && name[0] == 'S') {
    std::uint32_t leaves = 0;
    const auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), leaves);
    if (ec == std::errc{} && ptr == name.data() + name.size() && leaves >= 1 && leaves < kMaxPatternVertices) {
      return PatternGraph::from_edges(std::string(name), leaves + 1, complete_bipartite(1, leaves));
    }
  }
  return std::nullopt;
}

std::vector<std::string> catalog_names() {
  return {"K2", "K3", "P3", "P4", "C4", "C5", "C6", "K13", "K14", "K22", "K23", "S<k>"};
}

PatternGraph parse_pattern(std::istream& in, std::string name) {
  std::vector<Edge> edges;
  std::uint32_t vertices = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    long long u = 0;
    long long v = 0;
    if (!(fields >> u)) continue;
    if (!(fields >> v) || u < 0 || v < 0) throw std::invalid_argument("malformed pattern line: '" + line + "'");
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    vertices = std::max<std::uint32_t>(vertices, static_cast<std::uint32_t>(std::max(u, v) + 1));
  }
  if (edges.empty()) throw std::invalid_argument("pattern has no edges");
  return PatternGraph::from_edges(std::move(name), vertices, std::move(edges));
}

PatternGraph load_pattern(const std::string& name_or_path) {
  if (auto p = catalog_pattern(name_or_path)) return *p;
  std::ifstream file(name_or_path);
  if (!file) throw std::invalid_argument("unknown pattern '" + name_or_path + "' (not in catalog, no such file)");
  return parse_pattern(file, name_or_path);
}

std::uint64_t count_p3(const BitGraph& host) {
  std::uint64_t total = 0;
  for (Vertex u = 0; u < host.n(); ++u) {
    const std::uint64_t d = host.degree(u);
    if (d > 1) total += d * (d - 1) / 2;
  }
  return total;
}

std::uint64_t count_c4(const BitGraph& host) {
  // Every C4 has two diagonals; count pairs u < v by codegree.
  const Vertex n = host.n();
  std::vector<std::vector<Vertex>> nbrs(n);
  for (Vertex u = 0; u < n; ++u) nbrs[u] = host.neighbors(u);
  std::vector<std::uint32_t> codegree(n, 0);
  std::vector<Vertex> touched;
  std::uint64_t twice = 0;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex w : nbrs[u]) {
      for (Vertex v : nbrs[w]) {
        if (v <= u) continue;
        if (codegree[v]++ == 0) touched.push_back(v);
      }
    }
    for (Vertex v : touched) {
      const std::uint64_t c = codegree[v];
      twice += c * (c - 1) / 2;
      codegree[v] = 0;
    }
    touched.clear();
  }
  return twice / 2;
}

std::uint64_t count_embeddings(const BitGraph& host, const PatternGraph& pattern) {
  const std::uint32_t k = pattern.vertex_count();
  const Vertex n = host.n();
  if (k > n) return 0;
  const auto adj = adjacency_masks(pattern.edges());

  // Degree-descending order, each next vertex maximizing links to those placed.
  std::vector<std::uint32_t> order;
  std::uint32_t placed = 0;
  while (order.size() < k) {
    int best = -1;
    std::pair<int, int> best_key{-1, -1};
    for (std::uint32_t x = 0; x < k; ++x) {
      if ((placed >> x) & 1U) continue;
      const std::pair<int, int> key{std::popcount(adj[x] & placed), std::popcount(adj[x])};
      if (key > best_key) best_key = key, best = static_cast<int>(x);
    }
    order.push_back(static_cast<std::uint32_t>(best));
    placed |= 1U << best;
  }
  std::vector<std::vector<std::uint32_t>> anchors(k);  // earlier positions adjacent to position j
  for (std::uint32_t j = 0; j < k; ++j) {
    for (std::uint32_t i = 0; i < j; ++i) {
      if ((adj[order[j]] >> order[i]) & 1U) anchors[j].push_back(i);
    }
  }
  std::vector<std::uint32_t> need_degree(k);
  for (std::uint32_t j = 0; j < k; ++j) need_degree[j] = static_cast<std::uint32_t>(std::popcount(adj[order[j]]));

  std::vector<std::uint32_t> host_degree(n);
  for (Vertex v = 0; v < n; ++v) host_degree[v] = host.degree(v);

  const std::size_t words = host.words_per_row();
  std::vector<std::uint64_t> used(words, 0);
  std::vector<std::vector<std::uint64_t>> candidates(k, std::vector<std::uint64_t>(words, 0));
  std::vector<Vertex> image(k, 0);
  std::uint64_t total = 0;

  auto recurse = [&](auto&& self, std::uint32_t j) -> void {
    if (j == k) {
      ++total;
      return;
    }
    auto& cand = candidates[j];
    if (anchors[j].empty()) {
      std::fill(cand.begin(), cand.end(), ~std::uint64_t{0});
      if (n % 64 != 0) cand[words - 1] = (std::uint64_t{1} << (n % 64)) - 1;
    } else {
      const auto first = host.row(image[anchors[j][0]]);
      std::copy(first.begin(), first.end(), cand.begin());
      for (std::size_t a = 1; a < anchors[j].size(); ++a) {
        const auto r = host.row(image[anchors[j][a]]);
        for (std::size_t w = 0; w < words; ++w) cand[w] &= r[w];
      }
    }
    for (std::size_t w = 0; w < words; ++w) {
      for (std::uint64_t bits = cand[w] & ~used[w]; bits != 0; bits &= bits - 1) {
        const auto v = static_cast<Vertex>(w * 64 + std::countr_zero(bits));
        if (host_degree[v] < need_degree[j]) continue;
        image[j] = v;
        used[w] |= std::uint64_t{1} << (v % 64);
        self(self, j + 1);
        used[w] &= ~(std::uint64_t{1} << (v % 64));
      }
    }
  };
  recurse(recurse, 0);
  return total;
}

std::uint64_t count_copies(const BitGraph& host, const PatternGraph& pattern) {
  const std::uint32_t k = pattern.vertex_count();
  const bool allowed = k <= 4 || (k <= 6 && host.n() <= 5000) || (k <= kMaxPatternVertices && host.n() <= 64);
  if (!allowed) {
    throw ComplexityGuardError("count_copies: pattern with " + std::to_string(k) + " vertices on a host with " +
                               std::to_string(host.n()) + " vertices exceeds the counting guard");
  }
  if (pattern.edge_count() == 1 && k == 2) return host.edge_count();
  if (is_p3_shape(pattern)) return count_p3(host);
  if (is_c4_shape(pattern)) return count_c4(host);
  return count_embeddings(host, pattern) / pattern.aut();
}

VarianceMargin variance_margin(const PatternGraph& pattern, double eps) {
  const double slope = 0.5 - eps;
  VarianceMargin out{std::numeric_limits<double>::infinity(), 0.0, 0, 0};
  const std::uint32_t k = pattern.vertex_count();
  for (std::uint32_t mask = 1; mask < (1U << k); ++mask) {
    std::uint32_t induced = 0;
    for (const auto& [u, v] : pattern.edges()) {
      if (((mask >> u) & 1U) && ((mask >> v) & 1U)) ++induced;
    }
    if (induced == 0) continue;
    const auto v_h = static_cast<std::uint32_t>(std::popcount(mask));
    // Both extremes over edge subsets of this vertex set are attained by the
    // full induced edge set: v_H - slope * e_H decreases in e_H, e_H/v_H increases.
    const double margin = v_h - slope * induced;
    if (margin < out.margin) {
      out.margin = margin;
      out.worst_vertices = v_h;
      out.worst_edges = induced;
    }
    out.max_density = std::max(out.max_density, static_cast<double>(induced) / v_h);
  }
  return out;
}

std::uint64_t canonical_code(std::uint32_t n, const std::vector<Edge>& edges) {
  if (n > kMaxPatternVertices) throw std::invalid_argument("canonical_code: more than 8 vertices");
  if (n < 2) return 0;
  const EdgeIndex index(n);
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), 0U);
  std::uint64_t best = ~std::uint64_t{0};
  do {
    std::uint64_t code = 0;
    for (const auto& [u, v] : edges) code |= std::uint64_t{1} << index.encode(perm[u], perm[v]).value;
    best = std::min(best, code);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::string isomorphism_class_name(std::uint32_t n, const std::vector<Edge>& edges) {
  if (edges.empty()) return "empty";
  std::vector<int> relabel(n, -1);
  std::uint32_t used = 0;
  std::vector<Edge> compact;
  for (const auto& [u, v] : edges) {
    if (relabel[u] < 0) relabel[u] = static_cast<int>(used++);
    if (relabel[v] < 0) relabel[v] = static_cast<int>(used++);
    compact.emplace_back(relabel[u], relabel[v]);
  }
  struct Known {
    std::uint32_t vertices;
    std::uint64_t code;
    std::string name;
  };
  static const std::vector<Known> known = [] {
    std::vector<Known> out;
    for (const char* name : {"K2", "P3", "K3", "P4", "C4", "K13", "C5", "K14", "K23", "C6", "S5", "S6", "S7"}) {
      const auto p = catalog_pattern(name);
      out.push_back({p->vertex_count(), canonical_code(p->vertex_count(), p->edges()), p->name()});
    }
    return out;
  }();
  const std::uint64_t code = canonical_code(used, compact);
  for (const Known& k : known) {
    if (k.vertices == used && k.code == code) return k.name;
  }
  return "G" + std::to_string(code);
}

}  // namespace greedygraph
