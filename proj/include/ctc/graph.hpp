#pragma once

#include <iosfwd>
#include <span>
#include <unordered_map>
#include <vector>

#include "ctc/types.hpp"

namespace ctc {

/// Immutable undirected simple graph in CSR form.
///
/// Node ids are dense (0..n-1). Edge ids index the canonical edge list,
/// which is sorted by edge key, so edge id order == canonical key order.
/// Every adjacency slot carries the id of the edge it represents.
///
/// Internal ids are assigned in ascending external-id order, so ordering
/// by internal id and ordering by external id agree.
class Graph {
 public:
  Graph() = default;

  /// Builds from arbitrary pairs over nodes 0..node_count-1. Self-loops are
  /// dropped and duplicates merged. External ids are the identity.
  static Graph from_edges(NodeId node_count, std::span<const Edge> edges);

  /// As from_edges, but with an explicit external id per internal node.
  /// `external_ids` must be strictly increasing.
  static Graph from_edges(std::vector<ExternalId> external_ids,
                          std::span<const Edge> edges);

  std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return edges_.size(); }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  /// Edge ids parallel to neighbors(v).
  std::span<const EdgeId> incident_edges(NodeId v) const {
    return {edge_ids_.data() + offsets_[v], edge_ids_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }

  EdgeId find_edge(NodeId a, NodeId b) const;
  bool has_edge(NodeId a, NodeId b) const { return find_edge(a, b) != kNoEdge; }

  template <class F>
  void for_each_neighbor(NodeId v, F&& f) const {
    for (auto u : neighbors(v)) f(u);
  }
  bool is_live(NodeId v) const { return v < node_count(); }

  ExternalId external_id(NodeId v) const { return external_ids_[v]; }
  /// kNoNode if the external id is unknown.
  NodeId internal_id(ExternalId x) const;
  std::span<const ExternalId> external_ids() const { return external_ids_; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> neighbors_;
  std::vector<EdgeId> edge_ids_;
  std::vector<Edge> edges_;
  std::vector<ExternalId> external_ids_;
  std::unordered_map<ExternalId, NodeId> internal_of_;
};

/// Parses a whitespace-separated edge list; '#' lines and blank lines are
/// skipped. Ids are compacted in ascending external order. Throws ParseError.
Graph load_edge_list(std::istream& in);
Graph load_edge_list_file(const std::string& path);

/// Two-column "external internal" text, one node per line.
void save_id_map(const Graph& g, std::ostream& out);

/// Sorted intersection of the neighbor lists of u and v.
std::vector<NodeId> common_neighbors(const Graph& g, NodeId u, NodeId v);

/// Triangle count per edge id, via degree-ordered triangle listing.
std::vector<std::uint32_t> edge_support_all(const Graph& g);

}  // namespace ctc
