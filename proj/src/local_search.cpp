#include "ctc/local_search.hpp"

#include <algorithm>
#include <numeric>

namespace ctc {

namespace {

// Shortest path from u to v over edges with trussness >= t; empty if none.
std::vector<NodeId> level_path(const TrussIndex& idx, NodeId u, NodeId v,
                               Trussness t, std::vector<NodeId>& parent) {
  std::fill(parent.begin(), parent.end(), kNoNode);
  std::vector<NodeId> queue{u};
  parent[u] = u;
  for (std::size_t head = 0; head < queue.size() && parent[v] == kNoNode; ++head) {
    const NodeId x = queue[head];
    for (const auto& nb : idx.neighbors_at_least(x, t)) {
      if (parent[nb.node] != kNoNode) continue;
      parent[nb.node] = x;
      queue.push_back(nb.node);
    }
  }
  if (parent[v] == kNoNode) return {};
  std::vector<NodeId> path{v};
  while (path.back() != u) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

Trussness path_min_trussness(const Graph& g, const TrussIndex& idx, std::span<const NodeId> path) {
  Trussness m = std::numeric_limits<Trussness>::max();
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    m = std::min(m, idx.trussness(g.find_edge(path[i], path[i + 1])));
  return m;
}

double edge_weight(const TrussIndex& idx, EdgeId e, double gamma) {
  return 1.0 + gamma * static_cast<double>(idx.max_trussness() - idx.trussness(e));
}

}  // namespace

TrussDistance truss_distance(const Graph& g, const TrussIndex& idx, NodeId u, NodeId v,
                             double gamma) {
  TrussDistance best;
  if (u == v) {
    best.value = 0;
    best.path = {u};
    best.min_trussness = idx.vertex_trussness(u);
    return best;
  }
  const double top = idx.max_trussness();
  const Trussness cap = std::min(idx.vertex_trussness(u), idx.vertex_trussness(v));
  std::vector<NodeId> parent(g.node_count());
  for (auto t : idx.levels()) {  // descending
    if (t > cap) continue;
    const double penalty = gamma * (top - t);
    // Any path at this level or below costs at least one hop plus penalty.
    if (penalty + 1 >= best.value) break;
    auto path = level_path(idx, u, v, t, parent);
    if (path.empty()) continue;
    const double value = static_cast<double>(path.size() - 1) + penalty;
    if (value < best.value) {
      best.value = value;
      best.min_trussness = path_min_trussness(g, idx, path);
      best.path = std::move(path);
    }
  }
  return best;
}

SteinerTree steiner_tree(const Graph& g, const TrussIndex& idx, std::span<const NodeId> query_in,
                         double gamma) {
  const auto query = normalize_query(g, query_in);
  SteinerTree tree;
  if (query.size() == 1) {
    tree.nodes = query;
    tree.min_trussness = idx.vertex_trussness(query.front());
    return tree;
  }

  const std::size_t r = query.size();
  std::vector<std::vector<TrussDistance>> closure(r, std::vector<TrussDistance>(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) {
      closure[i][j] = truss_distance(g, idx, query[i], query[j], gamma);
      if (closure[i][j].path.empty()) throw NoCommunity("query nodes are not connected");
    }
  auto dist = [&](std::size_t i, std::size_t j) {
    return i < j ? closure[i][j].value : closure[j][i].value;
  };

  // Prim on the complete terminal graph; ties go to the lower index.
  std::vector<char> in_tree(r, 0);
  std::vector<double> key(r, kInfiniteDistance);
  std::vector<std::size_t> link(r, 0);
  std::vector<EdgeId> union_edges;
  key[0] = 0;
  for (std::size_t step = 0; step < r; ++step) {
    std::size_t next = r;
    for (std::size_t i = 0; i < r; ++i)
      if (!in_tree[i] && (next == r || key[i] < key[next])) next = i;
    in_tree[next] = 1;
    if (step > 0) {
      const auto& path = next < link[next] ? closure[next][link[next]].path
                                           : closure[link[next]][next].path;
      for (std::size_t i = 0; i + 1 < path.size(); ++i)
        union_edges.push_back(g.find_edge(path[i], path[i + 1]));
    }
    for (std::size_t i = 0; i < r; ++i)
      if (!in_tree[i] && dist(next, i) < key[i]) {
        key[i] = dist(next, i);
        link[i] = next;
      }
  }
  std::sort(union_edges.begin(), union_edges.end());
  union_edges.erase(std::unique(union_edges.begin(), union_edges.end()), union_edges.end());

  // Kruskal over the union with per-edge truss weights.
  std::stable_sort(union_edges.begin(), union_edges.end(), [&](EdgeId a, EdgeId b) {
    return edge_weight(idx, a, gamma) < edge_weight(idx, b, gamma);
  });
  std::vector<NodeId> parent(g.node_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](NodeId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<EdgeId> kept;
  for (auto e : union_edges) {
    const NodeId a = find(g.edge(e).u), b = find(g.edge(e).v);
    if (a == b) continue;
    parent[a] = b;
    kept.push_back(e);
  }

  // Strip non-terminal leaves until none remain.
  std::vector<std::size_t> degree(g.node_count(), 0);
  for (auto e : kept) {
    ++degree[g.edge(e).u];
    ++degree[g.edge(e).v];
  }
  std::vector<char> alive(kept.size(), 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (!alive[i]) continue;
      const auto [a, b] = g.edge(kept[i]);
      const bool a_leaf = degree[a] == 1 && !std::binary_search(query.begin(), query.end(), a);
      const bool b_leaf = degree[b] == 1 && !std::binary_search(query.begin(), query.end(), b);
      if (a_leaf || b_leaf) {
        alive[i] = 0;
        --degree[a];
        --degree[b];
        changed = true;
      }
    }
  }

  tree.min_trussness = std::numeric_limits<Trussness>::max();
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (!alive[i]) continue;
    tree.edges.push_back(kept[i]);
    tree.nodes.push_back(g.edge(kept[i]).u);
    tree.nodes.push_back(g.edge(kept[i]).v);
    tree.min_trussness = std::min(tree.min_trussness, idx.trussness(kept[i]));
  }
  std::sort(tree.edges.begin(), tree.edges.end());
  std::sort(tree.nodes.begin(), tree.nodes.end());
  tree.nodes.erase(std::unique(tree.nodes.begin(), tree.nodes.end()), tree.nodes.end());
  return tree;
}

GraphOverlay expand_tree(const Graph& g, const TrussIndex& idx, const SteinerTree& tree,
                         Trussness k_t, std::size_t eta) {
  if (eta < tree.nodes.size()) throw Error("eta is smaller than the Steiner tree");
  std::vector<char> admitted(g.node_count(), 0);
  std::vector<NodeId> order(tree.nodes.begin(), tree.nodes.end());
  for (auto v : order) admitted[v] = 1;
  for (std::size_t head = 0; head < order.size() && order.size() < eta; ++head) {
    for (const auto& nb : idx.neighbors_at_least(order[head], k_t)) {
      if (order.size() >= eta) break;
      if (admitted[nb.node]) continue;
      admitted[nb.node] = 1;
      order.push_back(nb.node);
    }
  }

  std::vector<EdgeId> edges(tree.edges.begin(), tree.edges.end());
  for (auto v : order)
    for (const auto& nb : idx.neighbors_at_least(v, k_t))
      if (v < nb.node && admitted[nb.node]) edges.push_back(nb.edge);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return GraphOverlay(g, edges);
}

LocalTruss extract_max_truss(const GraphOverlay& gt, std::span<const NodeId> query_in,
                             Trussness k_t) {
  const Graph& g = gt.base();
  std::vector<NodeId> query(query_in.begin(), query_in.end());
  std::sort(query.begin(), query.end());
  for (auto q : query)
    if (!gt.is_live(q) || gt.live_degree(q) == 0)
      throw NoCommunity("query node outside the expanded graph");

  const auto local = truss_decompose(gt);
  Trussness k = k_t;
  for (auto q : query) {
    Trussness best = 0;
    gt.for_each_incident(q, [&](NodeId, EdgeId e) { best = std::max(best, local[e]); });
    k = std::min(k, best);
  }

  for (; k >= 2; --k) {
    // Q's component among live edges with local trussness >= k.
    std::vector<char> seen(g.node_count(), 0);
    std::vector<NodeId> queue{query.front()};
    std::vector<EdgeId> edges;
    seen[query.front()] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      gt.for_each_incident(queue[head], [&](NodeId u, EdgeId e) {
        if (local[e] < k) return;
        edges.push_back(e);
        if (!seen[u]) {
          seen[u] = 1;
          queue.push_back(u);
        }
      });
    }
    if (std::all_of(query.begin(), query.end(), [&](NodeId q) { return seen[q]; })) {
      std::sort(edges.begin(), edges.end());
      edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
      return {k, GraphOverlay(g, edges)};
    }
  }
  throw NoCommunity("no k-truss connects the query inside the expanded graph");
}

CommunityResult lctc_search(const Graph& g, const TrussIndex& idx, const QuerySpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  const auto deadline =
      start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(spec.time_budget);
  const auto query = normalize_query(g, spec.query_nodes);

  const SteinerTree tree = steiner_tree(g, idx, query, spec.gamma);
  const std::size_t eta = std::max(spec.eta, tree.nodes.size());

  // Retry with 2x and 4x eta if Q cannot be joined inside the expansion.
  for (std::size_t factor = 1;; factor *= 2) {
    try {
      const GraphOverlay gt = expand_tree(g, idx, tree, tree.min_trussness, eta * factor);
      auto [k, ht] = extract_max_truss(gt, query, tree.min_trussness);
      auto result = peel_community(g, std::move(ht), k, query, ShellRule::kBulkFarthestSum, deadline);
      result.algorithm = Algorithm::kLocal;
      result.expanded_eta = factor > 1;
      result.elapsed = std::chrono::steady_clock::now() - start;
      return result;
    } catch (const NoCommunity&) {
      if (factor >= 4) throw;
    }
  }
}

}  // namespace ctc
