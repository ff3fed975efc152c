#pragma once

#include <algorithm>
#include <concepts>
#include <span>
#include <vector>

#include "ctc/overlay.hpp"

namespace ctc {

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

/// Hop distance per node from a source set; kUnreachable for dead or
/// unreachable nodes.
using DistanceField = std::vector<std::uint32_t>;

/// Anything with node_count(), is_live(v) and for_each_neighbor(v, f):
/// Graph and GraphOverlay both qualify.
template <class G>
concept GraphView = requires(const G& g, NodeId v) {
  { g.node_count() } -> std::convertible_to<std::size_t>;
  { g.is_live(v) } -> std::convertible_to<bool>;
  g.for_each_neighbor(v, [](NodeId) {});
};

template <GraphView G>
DistanceField multi_source_bfs(const G& g, std::span<const NodeId> sources) {
  DistanceField dist(g.node_count(), kUnreachable);
  std::vector<NodeId> queue;
  queue.reserve(64);
  for (auto s : sources) {
    if (!g.is_live(s) || dist[s] == 0) continue;
    dist[s] = 0;
    queue.push_back(s);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId v = queue[head];
    g.for_each_neighbor(v, [&](NodeId u) {
      if (dist[u] == kUnreachable) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    });
  }
  return dist;
}

template <GraphView G>
DistanceField bfs(const G& g, NodeId source) {
  return multi_source_bfs(g, std::span<const NodeId>(&source, 1));
}

template <GraphView G>
std::vector<NodeId> live_nodes_of(const G& g) {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (g.is_live(v)) out.push_back(v);
  return out;
}

/// True if all `nodes` are live and mutually reachable.
template <GraphView G>
bool connected_within(const G& g, std::span<const NodeId> nodes) {
  if (nodes.empty()) return true;
  if (!g.is_live(nodes.front())) return false;
  auto dist = bfs(g, nodes.front());
  return std::all_of(nodes.begin(), nodes.end(),
                     [&](NodeId v) { return g.is_live(v) && dist[v] != kUnreachable; });
}

template <GraphView G>
bool is_connected(const G& g) {
  auto nodes = live_nodes_of(g);
  return connected_within(g, std::span<const NodeId>(nodes));
}

/// Exact diameter by BFS from every live node. Throws on an empty or
/// disconnected view.
template <GraphView G>
std::uint32_t diameter(const G& g) {
  auto nodes = live_nodes_of(g);
  if (nodes.empty()) throw Error("diameter of an empty graph");
  std::uint32_t best = 0;
  for (auto s : nodes) {
    auto dist = bfs(g, s);
    for (auto v : nodes) {
      if (dist[v] == kUnreachable) throw Error("diameter of a disconnected graph");
      best = std::max(best, dist[v]);
    }
  }
  return best;
}

}  // namespace ctc
