#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ctc/graph.hpp"

namespace ctc::test {

inline Graph make(NodeId n, std::vector<Edge> edges) { return Graph::from_edges(n, edges); }

inline Graph g_tri() { return make(3, {{0, 1}, {1, 2}, {0, 2}}); }
inline Graph g_bowtie() { return make(4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}); }
inline Graph g_k4() { return make(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}); }
inline Graph g_2k4() {
  return make(7, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3},
                  {3, 4}, {3, 5}, {3, 6}, {4, 5}, {4, 6}, {5, 6}});
}
inline Graph g_k4path() {
  return make(6, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {3, 4}, {4, 5}});
}
inline Graph g_shortcut() {
  return make(5, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {0, 4}, {4, 1}});
}
inline Graph g_c5() { return make(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}); }
inline Graph g_path3() { return make(3, {{0, 1}, {1, 2}}); }

/// Deterministic uniform integer in [lo, hi].
inline std::uint64_t uniform(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t span = hi - lo + 1;
  const std::uint64_t floor = (0 - span) % span;
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= floor) return lo + x % span;
  }
}

inline double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Erdos-Renyi G(n, p).
inline Graph random_graph(std::mt19937_64& rng, NodeId n, double p) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (unit(rng) < p) edges.push_back({u, v});
  return Graph::from_edges(n, edges);
}

/// k distinct nodes with at least one edge each, or empty if not enough.
inline std::vector<NodeId> random_query(std::mt19937_64& rng, const Graph& g, std::size_t k) {
  std::vector<NodeId> pool;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (g.degree(v) > 0) pool.push_back(v);
  if (pool.size() < k) return {};
  for (std::size_t i = 0; i < k; ++i)
    std::swap(pool[i], pool[i + uniform(rng, 0, pool.size() - 1 - i)]);
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

/// Nodes reachable from `from` in g.
inline std::vector<char> reachable(const Graph& g, NodeId from) {
  std::vector<char> seen(g.node_count(), 0);
  std::vector<NodeId> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (auto u : g.neighbors(v))
      if (!seen[u]) {
        seen[u] = 1;
        stack.push_back(u);
      }
  }
  return seen;
}

/// A query whose nodes share one component of g, or empty.
inline std::vector<NodeId> connected_query(std::mt19937_64& rng, const Graph& g, std::size_t k) {
  for (int attempt = 0; attempt < 50; ++attempt) {
    auto q = random_query(rng, g, k);
    if (q.empty()) return q;
    const auto seen = reachable(g, q.front());
    if (std::all_of(q.begin(), q.end(), [&](NodeId v) { return seen[v]; })) return q;
  }
  return {};
}

/// Three disjoint K8s on 0..23 plus `bridges` random edges between cliques.
inline Graph planted_k8(std::uint64_t seed, std::size_t bridges = 20) {
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  for (NodeId c = 0; c < 3; ++c)
    for (NodeId a = 0; a < 8; ++a)
      for (NodeId b = a + 1; b < 8; ++b) edges.push_back({8 * c + a, 8 * c + b});
  std::set<std::pair<NodeId, NodeId>> added;
  while (added.size() < bridges) {
    const auto u = static_cast<NodeId>(uniform(rng, 0, 23));
    const auto v = static_cast<NodeId>(uniform(rng, 0, 23));
    if (u / 8 == v / 8) continue;
    if (added.insert({std::min(u, v), std::max(u, v)}).second) edges.push_back({u, v});
  }
  return Graph::from_edges(24, edges);
}

inline std::string edge_list_text(const Graph& g) {
  std::ostringstream os;
  for (const auto& e : g.edges()) os << g.external_id(e.u) << ' ' << g.external_id(e.v) << '\n';
  return os.str();
}

/// All-pairs hop distances by Floyd-Warshall; kInf for unreachable.
inline constexpr std::uint32_t kInf = 1u << 30;
inline std::vector<std::vector<std::uint32_t>> floyd_warshall(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<std::uint32_t>> d(n, std::vector<std::uint32_t>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

/// Triangles on (u, v) by scanning every third node.
inline std::uint32_t naive_support(const Graph& g, NodeId u, NodeId v) {
  std::uint32_t c = 0;
  for (NodeId w = 0; w < g.node_count(); ++w)
    if (w != u && w != v && g.has_edge(u, w) && g.has_edge(v, w)) ++c;
  return c;
}

inline std::vector<EdgeId> edge_ids(const Graph& g, std::initializer_list<Edge> edges) {
  std::vector<EdgeId> out;
  for (const auto& e : edges) out.push_back(g.find_edge(e.u, e.v));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ctc::test
