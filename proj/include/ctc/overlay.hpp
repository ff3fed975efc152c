#pragma once

#include <span>
#include <vector>

#include "ctc/graph.hpp"

namespace ctc {

/// Ordered record of removals applied to an overlay, split into snapshots.
///
/// Snapshot i is the initial live set minus the first node_marks[i] removed
/// nodes and the first edge_marks[i] removed edges.
struct RemovalLog {
  std::vector<NodeId> initial_nodes;
  std::vector<EdgeId> initial_edges;
  std::vector<NodeId> removed_nodes;
  std::vector<EdgeId> removed_edges;
  std::vector<std::size_t> node_marks;
  std::vector<std::size_t> edge_marks;

  std::size_t snapshot_count() const { return node_marks.size(); }
};

/// Mutable deletion view over an immutable Graph.
///
/// The base graph is never copied or compacted; liveness is a pair of bit
/// vectors. support(e) is the number of triangles on e among live edges and
/// is kept current by whoever removes edges (see truss_maintain); it is
/// computed from scratch on construction and by recompute_support().
class GraphOverlay {
 public:
  /// Everything in `base` live.
  explicit GraphOverlay(const Graph& base);

  /// Only `edges` (and their endpoints) live.
  GraphOverlay(const Graph& base, std::span<const EdgeId> edges);

  /// Replays the first `snapshot` checkpoints of `log`.
  static GraphOverlay restore(const Graph& base, const RemovalLog& log, std::size_t snapshot);

  const Graph& base() const { return *base_; }

  std::size_t node_count() const { return base_->node_count(); }
  std::size_t live_node_count() const { return live_nodes_; }
  std::size_t live_edge_count() const { return live_edges_; }

  bool is_live(NodeId v) const { return node_live_[v]; }
  bool edge_live(EdgeId e) const { return edge_live_[e]; }

  template <class F>
  void for_each_neighbor(NodeId v, F&& f) const {
    auto nb = base_->neighbors(v);
    auto ids = base_->incident_edges(v);
    for (std::size_t i = 0; i < nb.size(); ++i)
      if (edge_live_[ids[i]]) f(nb[i]);
  }
  /// f(neighbor, edge id) over live incident edges.
  template <class F>
  void for_each_incident(NodeId v, F&& f) const {
    auto nb = base_->neighbors(v);
    auto ids = base_->incident_edges(v);
    for (std::size_t i = 0; i < nb.size(); ++i)
      if (edge_live_[ids[i]]) f(nb[i], ids[i]);
  }
  /// f(w, edge(u,w), edge(v,w)) for every live triangle on (u, v).
  template <class F>
  void for_each_triangle(NodeId u, NodeId v, F&& f) const {
    auto a = base_->neighbors(u), b = base_->neighbors(v);
    auto ea = base_->incident_edges(u), eb = base_->incident_edges(v);
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] < b[j]) {
        ++i;
      } else if (b[j] < a[i]) {
        ++j;
      } else {
        if (edge_live_[ea[i]] && edge_live_[eb[j]]) f(a[i], ea[i], eb[j]);
        ++i;
        ++j;
      }
    }
  }

  std::size_t live_degree(NodeId v) const;
  /// Live nodes in ascending id order.
  std::vector<NodeId> live_nodes() const;
  /// Live nodes in unspecified order, without copying.
  std::span<const NodeId> live_node_list() const { return live_list_; }
  std::vector<EdgeId> live_edges() const;
  std::vector<NodeId> common_neighbors(NodeId u, NodeId v) const;

  std::uint32_t support(EdgeId e) const { return support_[e]; }
  void decrement_support(EdgeId e) { --support_[e]; }
  void recompute_support();

  /// Marks an edge dead and logs it. Does not touch supports.
  void remove_edge(EdgeId e);
  /// Marks a node dead and logs it. Its live edges must already be gone.
  void remove_node(NodeId v);

  /// Closes the current snapshot; the next removals belong to the next one.
  void checkpoint();
  const RemovalLog& log() const { return log_; }
  std::size_t checkpoint_count() const { return log_.snapshot_count(); }

 private:
  void start_log();
  void rebuild_live_list();

  const Graph* base_;
  std::vector<bool> node_live_;
  std::vector<bool> edge_live_;
  std::vector<std::uint32_t> support_;
  std::size_t live_nodes_ = 0;
  std::vector<NodeId> live_list_;
  std::vector<std::uint32_t> live_pos_;
  std::size_t live_edges_ = 0;
  RemovalLog log_;
};

/// Recounts triangles per live edge without using stored supports.
std::vector<std::uint32_t> recount_support(const GraphOverlay& ov);

}  // namespace ctc
