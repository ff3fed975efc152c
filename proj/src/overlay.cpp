#include "ctc/overlay.hpp"

#include <algorithm>

namespace ctc {

GraphOverlay::GraphOverlay(const Graph& base)
    : base_(&base),
      node_live_(base.node_count(), true),
      edge_live_(base.edge_count(), true),
      support_(edge_support_all(base)),
      live_nodes_(base.node_count()),
      live_edges_(base.edge_count()) {
  rebuild_live_list();
  start_log();
}

GraphOverlay::GraphOverlay(const Graph& base, std::span<const EdgeId> edges)
    : base_(&base),
      node_live_(base.node_count(), false),
      edge_live_(base.edge_count(), false),
      support_(base.edge_count(), 0) {
  for (auto e : edges) {
    if (edge_live_[e]) continue;
    edge_live_[e] = true;
    ++live_edges_;
    for (auto v : {base.edge(e).u, base.edge(e).v}) {
      if (!node_live_[v]) {
        node_live_[v] = true;
        ++live_nodes_;
      }
    }
  }
  recompute_support();
  rebuild_live_list();
  start_log();
}

void GraphOverlay::rebuild_live_list() {
  live_list_.clear();
  live_pos_.assign(node_live_.size(), 0);
  for (NodeId v = 0; v < node_live_.size(); ++v) {
    if (!node_live_[v]) continue;
    live_pos_[v] = static_cast<std::uint32_t>(live_list_.size());
    live_list_.push_back(v);
  }
}

void GraphOverlay::start_log() {
  log_ = RemovalLog{};
  log_.initial_nodes = live_nodes();
  log_.initial_edges = live_edges();
  checkpoint();
}

GraphOverlay GraphOverlay::restore(const Graph& base, const RemovalLog& log,
                                   std::size_t snapshot) {
  if (snapshot >= log.snapshot_count()) throw Error("snapshot index out of range");
  GraphOverlay ov(base, log.initial_edges);
  // Nodes may be live without edges (e.g. a lone query node).
  for (auto v : log.initial_nodes) {
    if (!ov.node_live_[v]) {
      ov.node_live_[v] = true;
      ++ov.live_nodes_;
    }
  }
  for (std::size_t i = 0; i < log.edge_marks[snapshot]; ++i) {
    ov.edge_live_[log.removed_edges[i]] = false;
    --ov.live_edges_;
  }
  for (std::size_t i = 0; i < log.node_marks[snapshot]; ++i) {
    ov.node_live_[log.removed_nodes[i]] = false;
    --ov.live_nodes_;
  }
  ov.recompute_support();
  ov.rebuild_live_list();
  ov.start_log();
  return ov;
}

std::size_t GraphOverlay::live_degree(NodeId v) const {
  std::size_t d = 0;
  for (auto e : base_->incident_edges(v)) d += edge_live_[e];
  return d;
}

std::vector<NodeId> GraphOverlay::live_nodes() const {
  std::vector<NodeId> out(live_list_.begin(), live_list_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EdgeId> GraphOverlay::live_edges() const {
  std::vector<EdgeId> out;
  out.reserve(live_edges_);
  for (EdgeId e = 0; e < edge_live_.size(); ++e)
    if (edge_live_[e]) out.push_back(e);
  return out;
}

std::vector<NodeId> GraphOverlay::common_neighbors(NodeId u, NodeId v) const {
  std::vector<NodeId> out;
  for_each_triangle(u, v, [&](NodeId w, EdgeId, EdgeId) { out.push_back(w); });
  return out;
}

void GraphOverlay::recompute_support() {
  std::fill(support_.begin(), support_.end(), 0);
  for (EdgeId e = 0; e < edge_live_.size(); ++e) {
    if (!edge_live_[e]) continue;
    std::uint32_t s = 0;
    for_each_triangle(base_->edge(e).u, base_->edge(e).v,
                      [&](NodeId, EdgeId, EdgeId) { ++s; });
    support_[e] = s;
  }
}

void GraphOverlay::remove_edge(EdgeId e) {
  if (!edge_live_[e]) return;
  edge_live_[e] = false;
  --live_edges_;
  log_.removed_edges.push_back(e);
}

void GraphOverlay::remove_node(NodeId v) {
  if (!node_live_[v]) return;
  node_live_[v] = false;
  --live_nodes_;
  log_.removed_nodes.push_back(v);
  const NodeId last = live_list_.back();
  live_list_[live_pos_[v]] = last;
  live_pos_[last] = live_pos_[v];
  live_list_.pop_back();
}

void GraphOverlay::checkpoint() {
  log_.node_marks.push_back(log_.removed_nodes.size());
  log_.edge_marks.push_back(log_.removed_edges.size());
}

std::vector<std::uint32_t> recount_support(const GraphOverlay& ov) {
  const Graph& g = ov.base();
  std::vector<std::uint32_t> out(g.edge_count(), 0);
  for (auto e : ov.live_edges()) {
    const auto [u, v] = g.edge(e);
    std::uint32_t s = 0;
    ov.for_each_neighbor(u, [&](NodeId w) {
      if (w == v) return;
      EdgeId vw = g.find_edge(v, w);
      if (vw != kNoEdge && ov.edge_live(vw)) ++s;
    });
    out[e] = s;
  }
  return out;
}

}  // namespace ctc
