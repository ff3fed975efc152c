#include "ctc/search.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ctc {

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kBasic: return "basic";
    case Algorithm::kBulkDelete: return "bd";
    case Algorithm::kLocal: return "lctc";
    case Algorithm::kOracle: return "oracle";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  if (name == "basic") return Algorithm::kBasic;
  if (name == "bd") return Algorithm::kBulkDelete;
  if (name == "lctc") return Algorithm::kLocal;
  if (name == "oracle") return Algorithm::kOracle;
  return std::nullopt;
}

std::vector<NodeId> normalize_query(const Graph& g, std::span<const NodeId> query) {
  if (query.empty()) throw NoCommunity("empty query");
  std::vector<NodeId> q(query.begin(), query.end());
  std::sort(q.begin(), q.end());
  if (std::adjacent_find(q.begin(), q.end()) != q.end())
    throw NoCommunity("duplicate query node");
  for (auto v : q) {
    if (v >= g.node_count()) throw NoCommunity("unknown query node");
    if (g.degree(v) == 0) throw NoCommunity("query node has no edges");
  }
  return q;
}

namespace {

struct DisjointSets {
  std::vector<NodeId> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  NodeId find(NodeId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(NodeId a, NodeId b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Per-search scratch sized to the base graph, reused across iterations so
// each iteration only touches live nodes.
struct Scratch {
  std::vector<std::uint32_t> stamp;
  std::uint32_t epoch = 0;
  std::vector<std::uint32_t> dist;
  std::vector<std::uint32_t> max_dist;
  std::vector<std::uint64_t> sum_dist;
  std::vector<NodeId> queue;

  explicit Scratch(std::size_t n)
      : stamp(n, 0), dist(n, kUnreachable), max_dist(n, 0), sum_dist(n, 0) {}

  std::uint32_t next_epoch() {
    if (++epoch == 0) {
      std::fill(stamp.begin(), stamp.end(), 0);
      epoch = 1;
    }
    return epoch;
  }

  // BFS from `source` over live edges; dist valid where stamp == returned epoch.
  std::uint32_t bfs(const GraphOverlay& ov, NodeId source) {
    const auto e = next_epoch();
    queue.clear();
    stamp[source] = e;
    dist[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId v = queue[head];
      ov.for_each_neighbor(v, [&](NodeId u) {
        if (stamp[u] != e) {
          stamp[u] = e;
          dist[u] = dist[v] + 1;
          queue.push_back(u);
        }
      });
    }
    return e;
  }
};

// Fills scratch.max_dist / sum_dist for live nodes and returns the graph
// query distance. Nodes unreachable from some q get kUnreachable.
std::uint32_t compute_query_distances(const GraphOverlay& ov, std::span<const NodeId> query,
                                      Scratch& s) {
  for (auto v : ov.live_node_list()) {
    s.max_dist[v] = 0;
    s.sum_dist[v] = 0;
  }
  for (auto q : query) {
    const auto e = s.bfs(ov, q);
    for (auto v : ov.live_node_list()) {
      if (s.stamp[v] != e) {
        s.max_dist[v] = kUnreachable;
        continue;
      }
      if (s.max_dist[v] != kUnreachable) s.max_dist[v] = std::max(s.max_dist[v], s.dist[v]);
      s.sum_dist[v] += s.dist[v];
    }
  }
  std::uint32_t gmax = 0;
  for (auto v : ov.live_node_list()) gmax = std::max(gmax, s.max_dist[v]);
  return gmax;
}

MaintainOutcome maintain(GraphOverlay& ov, std::span<const NodeId> removed, Trussness k,
                         std::span<const NodeId> query, Scratch& s) {
  const Graph& g = ov.base();
  const std::size_t live_before = ov.live_node_count();
  const auto threshold = static_cast<std::int64_t>(k) - 2;

  // Edges inside the removed set close only triangles whose edges all go,
  // so they are dropped without support updates.
  const auto in_removed = s.next_epoch();
  for (auto v : removed) s.stamp[v] = in_removed;

  std::vector<EdgeId> pending;
  std::vector<NodeId> touched;
  for (auto v : removed) {
    if (!ov.is_live(v)) continue;
    ov.for_each_incident(v, [&](NodeId u, EdgeId e) {
      if (s.stamp[u] == in_removed) {
        ov.remove_edge(e);
      } else {
        pending.push_back(e);
        touched.push_back(u);
      }
    });
  }

  // An edge enters `pending` when its support first drops below k - 2;
  // supports only fall, so that happens at most once.
  auto lower = [&](EdgeId f) {
    ov.decrement_support(f);
    if (static_cast<std::int64_t>(ov.support(f)) == threshold - 1) pending.push_back(f);
  };
  for (std::size_t i = 0; i < pending.size(); ++i) {
    const EdgeId e = pending[i];
    if (!ov.edge_live(e)) continue;
    const auto [u, v] = g.edge(e);
    ov.for_each_triangle(u, v, [&](NodeId, EdgeId uw, EdgeId vw) {
      lower(uw);
      lower(vw);
    });
    ov.remove_edge(e);
    touched.push_back(u);
    touched.push_back(v);
  }

  for (auto v : removed) ov.remove_node(v);
  for (auto v : touched)
    if (ov.is_live(v) && ov.live_degree(v) == 0) ov.remove_node(v);

  MaintainOutcome out{false, 0};
  const bool query_alive = std::all_of(query.begin(), query.end(), [&](NodeId q) { return ov.is_live(q); });
  if (query_alive) {
    const auto e = s.bfs(ov, query.front());
    out.feasible = std::all_of(query.begin(), query.end(), [&](NodeId q) { return s.stamp[q] == e; });
    if (out.feasible) {
      // Drop whatever no longer hangs together with Q. Triangles there lie
      // entirely outside Q's component, so no support updates are needed.
      std::vector<NodeId> stray;
      for (auto v : ov.live_node_list())
        if (s.stamp[v] != e) stray.push_back(v);
      for (auto v : stray) {
        ov.for_each_incident(v, [&](NodeId, EdgeId f) { ov.remove_edge(f); });
        ov.remove_node(v);
      }
    }
  }
  out.removed_nodes = live_before - ov.live_node_count();
  return out;
}

}  // namespace

G0Result find_g0(const Graph& g, const TrussIndex& idx, std::span<const NodeId> query_in) {
  const auto query = normalize_query(g, query_in);
  const auto n = g.node_count();

  Trussness k = std::numeric_limits<Trussness>::max();
  for (auto q : query) k = std::min(k, idx.vertex_trussness(q));

  DisjointSets sets(n);
  std::vector<char> in_g0(n, 0);
  std::vector<char> edge_in(g.edge_count(), 0);
  std::vector<Trussness> level_stamp(n, 0);
  std::vector<std::vector<NodeId>> pending(k + 1);
  std::vector<EdgeId> g0_edges;
  pending[k] = query;

  auto query_connected = [&] {
    const NodeId root = sets.find(query.front());
    return std::all_of(query.begin(), query.end(), [&](NodeId q) { return sets.find(q) == root; });
  };

  for (;; --k) {
    if (k < 2) throw NoCommunity("query nodes lie in different components");
    std::vector<NodeId> frontier;
    for (auto v : pending[k]) {
      if (level_stamp[v] == k) continue;
      level_stamp[v] = k;
      frontier.push_back(v);
    }
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      const NodeId v = frontier[i];
      // A node already in G0 has had every edge above this level scanned.
      Trussness upper = std::numeric_limits<Trussness>::max();
      if (in_g0[v]) {
        upper = k + 1;
      } else {
        in_g0[v] = 1;
      }
      for (const auto& [u, e] : idx.neighbors_in_range(v, k, upper)) {
        if (!edge_in[e]) {
          edge_in[e] = 1;
          g0_edges.push_back(e);
          sets.unite(u, v);
        }
        if (level_stamp[u] != k) {
          level_stamp[u] = k;
          frontier.push_back(u);
        }
      }
      if (const Trussness next = idx.next_level_below(v, k); next >= 2) pending[next].push_back(v);
    }
    pending[k].clear();
    if (query_connected()) break;
  }

  std::sort(g0_edges.begin(), g0_edges.end());
  return {k, GraphOverlay(g, g0_edges)};
}

MaintainOutcome truss_maintain(GraphOverlay& ov, std::span<const NodeId> removed, Trussness k,
                               std::span<const NodeId> query) {
  Scratch s(ov.node_count());
  return maintain(ov, removed, k, query, s);
}

QueryDistances query_distance_all(const GraphOverlay& ov, std::span<const NodeId> query) {
  Scratch s(ov.node_count());
  QueryDistances out;
  out.graph_distance = compute_query_distances(ov, query, s);
  out.max_dist.assign(ov.node_count(), kUnreachable);
  out.sum_dist.assign(ov.node_count(), 0);
  for (auto v : ov.live_node_list()) {
    out.max_dist[v] = s.max_dist[v];
    out.sum_dist[v] = s.sum_dist[v];
  }
  return out;
}

CommunityResult peel_community(const Graph& g, GraphOverlay ov, Trussness k,
                               std::span<const NodeId> query, ShellRule rule,
                               std::chrono::steady_clock::time_point deadline) {
  CommunityResult result;
  result.k = k;
  result.g0_nodes = ov.live_node_count();
  Scratch s(g.node_count());
  std::vector<std::uint32_t> snapshot_distance;
  std::uint32_t shell = kUnreachable;  // the running d of the bulk rules
  std::vector<NodeId> doomed;

  while (true) {
    const std::uint32_t gmax = compute_query_distances(ov, query, s);
    snapshot_distance.push_back(gmax);
    if (std::chrono::steady_clock::now() > deadline) {
      result.partial = true;
      break;
    }

    doomed.clear();
    auto live = ov.live_node_list();
    switch (rule) {
      case ShellRule::kSingleFarthest: {
        NodeId pick = kNoNode;
        for (auto v : live)
          if (s.max_dist[v] == gmax && v < pick) pick = v;
        doomed.push_back(pick);
        break;
      }
      case ShellRule::kBulk: {
        shell = std::min(shell, gmax);
        for (auto v : live)
          if (s.max_dist[v] + 1 >= shell) doomed.push_back(v);
        break;
      }
      case ShellRule::kBulkFarthestSum: {
        shell = std::min(shell, gmax);
        std::uint64_t best_sum = 0;
        for (auto v : live)
          if (s.max_dist[v] >= shell) best_sum = std::max(best_sum, s.sum_dist[v]);
        for (auto v : live)
          if (s.max_dist[v] >= shell && s.sum_dist[v] == best_sum) doomed.push_back(v);
        break;
      }
    }
    std::sort(doomed.begin(), doomed.end());

    const auto outcome = maintain(ov, doomed, k, query, s);
    ++result.iterations;
    result.log.push_back({gmax, outcome.removed_nodes});
    if (!outcome.feasible) break;
    ov.checkpoint();
  }

  // Smallest query distance wins; among equals, the latest (smallest) graph.
  std::size_t best = 0;
  for (std::size_t i = 0; i < snapshot_distance.size(); ++i)
    if (snapshot_distance[i] <= snapshot_distance[best]) best = i;

  result.removals = ov.log();
  const GraphOverlay chosen = GraphOverlay::restore(g, result.removals, best);
  result.chosen_snapshot = best;
  result.nodes = chosen.live_nodes();
  result.edges = chosen.live_edges();
  result.query_distance = snapshot_distance[best];
  result.diameter = check_community(g, result.edges, query, k).diameter;
  return result;
}

namespace {

CommunityResult run_global(const Graph& g, const TrussIndex& idx, const QuerySpec& spec,
                           ShellRule rule, Algorithm tag) {
  const auto start = std::chrono::steady_clock::now();
  const auto deadline =
      start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(spec.time_budget);
  const auto query = normalize_query(g, spec.query_nodes);
  auto [k, g0] = find_g0(g, idx, query);
  auto result = peel_community(g, std::move(g0), k, query, rule, deadline);
  result.algorithm = tag;
  result.elapsed = std::chrono::steady_clock::now() - start;
  return result;
}

}  // namespace

CommunityResult basic_search(const Graph& g, const TrussIndex& idx, const QuerySpec& spec) {
  return run_global(g, idx, spec, ShellRule::kSingleFarthest, Algorithm::kBasic);
}

CommunityResult bulk_delete_search(const Graph& g, const TrussIndex& idx, const QuerySpec& spec) {
  return run_global(g, idx, spec, ShellRule::kBulk, Algorithm::kBulkDelete);
}

GraphOverlay snapshot_restore(const Graph& g, const RemovalLog& log, std::size_t i) {
  return GraphOverlay::restore(g, log, i);
}

// --- validation ------------------------------------------------------------

std::string CommunityCheck::describe() const {
  std::ostringstream os;
  os << "contains_query=" << contains_query << " connected=" << connected << " truss=" << truss
     << " sandwich=" << distance_sandwich << " diameter_bound=" << diameter_bound
     << " diameter=" << diameter << " query_distance=" << query_distance;
  return os.str();
}

CommunityCheck check_community(const Graph& g, std::span<const EdgeId> edges,
                               std::span<const NodeId> query, Trussness k) {
  CommunityCheck c;
  if (edges.empty()) return c;

  // Compact copy of the community, relabelled 0..n'-1 in id order.
  std::vector<NodeId> nodes;
  for (auto e : edges) {
    nodes.push_back(g.edge(e).u);
    nodes.push_back(g.edge(e).v);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  auto local = [&](NodeId v) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
    return (it != nodes.end() && *it == v) ? static_cast<NodeId>(it - nodes.begin()) : kNoNode;
  };
  std::vector<Edge> local_edges;
  for (auto e : edges) local_edges.push_back({local(g.edge(e).u), local(g.edge(e).v)});
  const Graph h = Graph::from_edges(static_cast<NodeId>(nodes.size()), local_edges);

  std::vector<NodeId> q;
  c.contains_query = true;
  for (auto v : query) {
    const NodeId lv = local(v);
    if (lv == kNoNode) c.contains_query = false;
    else q.push_back(lv);
  }
  c.connected = is_connected(h);

  const auto support = edge_support_all(h);
  c.truss = std::all_of(support.begin(), support.end(),
                        [&](std::uint32_t s) { return std::int64_t{s} >= std::int64_t{k} - 2; });
  if (!c.connected || !c.contains_query) return c;

  c.diameter = diameter(h);
  for (auto s : q) {
    const auto dist = bfs(h, s);
    for (auto d : dist) c.query_distance = std::max(c.query_distance, d);
  }
  c.distance_sandwich = c.query_distance <= c.diameter && c.diameter <= 2 * c.query_distance;
  c.diameter_bound = k >= 2 && c.diameter <= (2 * nodes.size() - 2) / k;
  return c;
}

}  // namespace ctc
