#include "ctc/oracle.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <string>

namespace ctc::oracle {

namespace {

// ---- arbitrary-size bitset adjacency, for decomposition and max_k -------

struct BitAdjacency {
  std::size_t words;
  std::vector<std::vector<std::uint64_t>> rows;

  explicit BitAdjacency(const Graph& g)
      : words((g.node_count() + 63) / 64), rows(g.node_count(), std::vector<std::uint64_t>(words, 0)) {
    for (const auto& e : g.edges()) {
      set(e.u, e.v);
      set(e.v, e.u);
    }
  }
  void set(NodeId a, NodeId b) { rows[a][b / 64] |= std::uint64_t{1} << (b % 64); }
  void clear(NodeId a, NodeId b) { rows[a][b / 64] &= ~(std::uint64_t{1} << (b % 64)); }
  bool test(NodeId a, NodeId b) const { return (rows[a][b / 64] >> (b % 64)) & 1; }
  std::uint32_t common(NodeId a, NodeId b) const {
    std::uint32_t c = 0;
    for (std::size_t w = 0; w < words; ++w) c += std::popcount(rows[a][w] & rows[b][w]);
    return c;
  }
};

// Shrinks `alive` to the maximal subgraph with every support >= k - 2.
void fixpoint(const Graph& g, BitAdjacency& adj, std::vector<char>& alive, Trussness k) {
  for (bool changed = true; changed;) {
    changed = false;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if (!alive[e]) continue;
      const auto [u, v] = g.edge(e);
      if (std::int64_t{adj.common(u, v)} >= std::int64_t{k} - 2) continue;
      alive[e] = 0;
      adj.clear(u, v);
      adj.clear(v, u);
      changed = true;
    }
  }
}

bool query_joined(const Graph& g, const std::vector<char>& alive, std::span<const NodeId> query) {
  std::vector<char> seen(g.node_count(), 0);
  std::vector<NodeId> stack{query.front()};
  seen[query.front()] = 1;
  bool has_edge = false;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    auto nb = g.neighbors(v);
    auto ids = g.incident_edges(v);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (!alive[ids[i]]) continue;
      has_edge = true;
      if (!seen[nb[i]]) {
        seen[nb[i]] = 1;
        stack.push_back(nb[i]);
      }
    }
  }
  return has_edge && std::all_of(query.begin(), query.end(), [&](NodeId q) { return seen[q]; });
}

void validate_query(const Graph& g, std::span<const NodeId> query) {
  if (query.empty()) throw NoCommunity("empty query");
  for (auto q : query)
    if (q >= g.node_count()) throw NoCommunity("unknown query node");
}

// ---- 32-bit mask enumeration for the exact CTC --------------------------

using Mask = std::uint32_t;

struct MaskGraph {
  std::size_t n;
  std::vector<Mask> adj;
};

MaskGraph mask_graph(const Graph& g) {
  if (g.node_count() > kMaxEnumerationNodes)
    throw OracleSizeExceeded("exact oracle limited to " + std::to_string(kMaxEnumerationNodes) +
                             " nodes");
  MaskGraph m{g.node_count(), std::vector<Mask>(g.node_count(), 0)};
  for (const auto& e : g.edges()) {
    m.adj[e.u] |= Mask{1} << e.v;
    m.adj[e.v] |= Mask{1} << e.u;
  }
  return m;
}

// k-truss fixpoint of G[S]; returns per-node adjacency restricted to it.
std::vector<Mask> truss_of_subset(const MaskGraph& m, Mask subset, Trussness k) {
  std::vector<Mask> a(m.n, 0);
  for (std::size_t v = 0; v < m.n; ++v)
    if (subset >> v & 1) a[v] = m.adj[v] & subset;
  const int need = static_cast<int>(k) - 2;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t u = 0; u < m.n; ++u) {
      for (Mask rest = a[u] & ~((Mask{2} << u) - 1); rest; rest &= rest - 1) {
        const auto v = static_cast<std::size_t>(std::countr_zero(rest));
        if (std::popcount(a[u] & a[v]) >= need) continue;
        a[u] &= ~(Mask{1} << v);
        a[v] &= ~(Mask{1} << u);
        changed = true;
      }
    }
  }
  return a;
}

Mask component_of(const std::vector<Mask>& a, std::size_t start) {
  Mask seen = Mask{1} << start, frontier = seen;
  while (frontier) {
    Mask next = 0;
    for (Mask f = frontier; f; f &= f - 1) next |= a[static_cast<std::size_t>(std::countr_zero(f))];
    frontier = next & ~seen;
    seen |= next;
  }
  return seen;
}

std::uint32_t eccentricity(const std::vector<Mask>& a, std::size_t start, Mask within) {
  Mask seen = Mask{1} << start, frontier = seen;
  std::uint32_t depth = 0;
  while (seen != within) {
    Mask next = 0;
    for (Mask f = frontier; f; f &= f - 1) next |= a[static_cast<std::size_t>(std::countr_zero(f))];
    frontier = next & ~seen;
    if (!frontier) break;
    seen |= frontier;
    ++depth;
  }
  return depth;
}

Community make_community(const Graph& g, const std::vector<Mask>& a, Mask nodes, Mask query) {
  Community c;
  for (Mask f = nodes; f; f &= f - 1) {
    const auto v = static_cast<NodeId>(std::countr_zero(f));
    c.nodes.push_back(v);
    for (Mask r = a[v] & ~((Mask{2} << v) - 1); r; r &= r - 1)
      c.edges.push_back(g.find_edge(v, static_cast<NodeId>(std::countr_zero(r))));
    const auto ecc = eccentricity(a, v, nodes);
    c.diameter = std::max(c.diameter, ecc);
    if (query >> v & 1) c.query_distance = std::max(c.query_distance, ecc);
  }
  std::sort(c.edges.begin(), c.edges.end());
  return c;
}

// Calls f(community) for Q's component of the k-truss fixpoint of every
// subset containing Q, whenever that component holds all of Q and an edge.
template <class F>
void enumerate(const Graph& g, const MaskGraph& m, Mask query, Trussness k, F&& f) {
  const Mask all = m.n == 32 ? ~Mask{0} : (Mask{1} << m.n) - 1;
  const Mask free = all & ~query;
  const auto anchor = static_cast<std::size_t>(std::countr_zero(query));
  // Walk every submask of `free`.
  for (Mask extra = free;; extra = (extra - 1) & free) {
    const Mask subset = query | extra;
    auto a = truss_of_subset(m, subset, k);
    if (a[anchor]) {
      const Mask comp = component_of(a, anchor);
      if ((comp & query) == query) f(make_community(g, a, comp, query));
    }
    if (extra == 0) break;
  }
}

Mask query_mask(const Graph& g, std::span<const NodeId> query) {
  validate_query(g, query);
  Mask q = 0;
  for (auto v : query) q |= Mask{1} << v;
  return q;
}

}  // namespace

std::vector<Trussness> truss_decompose(const Graph& g) {
  if (g.node_count() > kMaxDecomposeNodes)
    throw OracleSizeExceeded("oracle decomposition limited to " +
                             std::to_string(kMaxDecomposeNodes) + " nodes");
  std::vector<Trussness> tau(g.edge_count(), 2);
  std::vector<char> alive(g.edge_count(), 1);
  BitAdjacency adj(g);
  for (Trussness k = 3;; ++k) {
    fixpoint(g, adj, alive, k);
    bool any = false;
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      if (alive[e]) {
        tau[e] = k;
        any = true;
      }
    if (!any) break;
  }
  return tau;
}

Trussness max_k(const Graph& g, std::span<const NodeId> query) {
  validate_query(g, query);
  if (g.node_count() > kMaxDecomposeNodes) throw OracleSizeExceeded("oracle max_k: graph too large");
  std::vector<char> alive(g.edge_count(), 1);
  BitAdjacency adj(g);
  Trussness best = 0;
  for (Trussness k = 2;; ++k) {
    fixpoint(g, adj, alive, k);
    if (!query_joined(g, alive, query)) break;
    best = k;
  }
  if (best < 2) throw NoCommunity("query not connected at any level");
  return best;
}

Answer ctc(const Graph& g, std::span<const NodeId> query) {
  const MaskGraph m = mask_graph(g);
  const Mask q = query_mask(g, query);
  Answer ans;
  ans.k_opt = max_k(g, query);
  bool found = false;
  enumerate(g, m, q, ans.k_opt, [&](Community c) {
    if (!found) {
      found = true;
      ans.diam_opt = c.diameter;
      ans.min_query_distance = c.query_distance;
      ans.witness = ans.min_qd_witness = ans.maximal_optimal = c;
      return;
    }
    if (c.diameter < ans.diam_opt || (c.diameter == ans.diam_opt && c.nodes < ans.witness.nodes)) {
      ans.diam_opt = c.diameter;
      ans.witness = c;
    }
    if (c.query_distance < ans.min_query_distance) {
      ans.min_query_distance = c.query_distance;
      ans.min_qd_witness = c;
    }
    const auto& best = ans.maximal_optimal;
    const bool better_diam = c.diameter < best.diameter;
    const bool same_diam_bigger =
        c.diameter == best.diameter &&
        std::pair(c.nodes.size(), c.edges.size()) > std::pair(best.nodes.size(), best.edges.size());
    if (better_diam || same_diam_bigger) ans.maximal_optimal = std::move(c);
  });
  if (!found) throw NoCommunity("no feasible community");
  return ans;
}

std::uint32_t min_query_distance(const Graph& g, std::span<const NodeId> query, Trussness k) {
  const MaskGraph m = mask_graph(g);
  const Mask q = query_mask(g, query);
  std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
  enumerate(g, m, q, k, [&](const Community& c) { best = std::min(best, c.query_distance); });
  if (best == std::numeric_limits<std::uint32_t>::max()) throw NoCommunity("no feasible community");
  return best;
}

std::vector<Community> query_independent_optima(const Graph& g) {
  const MaskGraph m = mask_graph(g);
  const auto tau = truss_decompose(g);
  if (tau.empty()) return {};
  const Trussness top = *std::max_element(tau.begin(), tau.end());

  std::set<std::vector<EdgeId>> seen;
  std::vector<Community> best;
  const Mask all = m.n == 32 ? ~Mask{0} : (Mask{1} << m.n) - 1;
  for (Mask subset = all; subset; subset = (subset - 1) & all) {
    auto a = truss_of_subset(m, subset, top);
    Mask covered = 0;
    for (std::size_t v = 0; v < m.n; ++v) {
      if (!a[v] || (covered >> v & 1)) continue;
      const Mask comp = component_of(a, v);
      covered |= comp;
      Community c = make_community(g, a, comp, 0);
      if (!seen.insert(c.edges).second) continue;
      if (!best.empty() && c.diameter > best.front().diameter) continue;
      if (!best.empty() && c.diameter < best.front().diameter) best.clear();
      best.push_back(std::move(c));
    }
  }
  return best;
}

}  // namespace ctc::oracle
