#pragma once

#include <limits>
#include <span>
#include <vector>

#include "ctc/search.hpp"

namespace ctc {

inline constexpr double kInfiniteDistance = std::numeric_limits<double>::infinity();

/// Path length plus gamma * (max graph trussness - weakest edge trussness),
/// minimized over all u-v paths.
struct TrussDistance {
  double value = kInfiniteDistance;
  std::vector<NodeId> path;  // u ... v; empty when unreachable
  Trussness min_trussness = 0;
};

/// Exact minimum by threshold sweep: for each trussness level t, a BFS over
/// edges with trussness >= t gives the shortest length L_t, and the answer is
/// min_t L_t + gamma * (tau_max - t).
TrussDistance truss_distance(const Graph& g, const TrussIndex& idx, NodeId u, NodeId v,
                             double gamma);

struct SteinerTree {
  std::vector<NodeId> nodes;  // ascending
  std::vector<EdgeId> edges;  // ascending
  Trussness min_trussness = 0;
};

/// Kou-Markowsky-Berman under truss distance: MST of the terminals'
/// complete distance graph, expanded into witness paths, re-spanned by MST
/// over per-edge truss weights, then pruned of non-terminal leaves. A single
/// terminal gives an edgeless tree with min_trussness = tau(q).
/// Throws NoCommunity if the terminals are not connected.
SteinerTree steiner_tree(const Graph& g, const TrussIndex& idx, std::span<const NodeId> query,
                         double gamma);

/// BFS from the tree's nodes over edges of trussness >= k_t, admitting nodes
/// until eta are held. The result holds every such edge among admitted
/// nodes, so it always contains the tree.
GraphOverlay expand_tree(const Graph& g, const TrussIndex& idx, const SteinerTree& tree,
                         Trussness k_t, std::size_t eta);

struct LocalTruss {
  Trussness k;
  GraphOverlay truss;
};

/// Local truss decomposition of `gt`, then the largest k <= k_t at which Q
/// is connected; returns Q's component at that level. Throws NoCommunity.
LocalTruss extract_max_truss(const GraphOverlay& gt, std::span<const NodeId> query, Trussness k_t);

/// Steiner seed, local expansion, max-truss extraction, then peeling with
/// the farthest-sum shell.
CommunityResult lctc_search(const Graph& g, const TrussIndex& idx, const QuerySpec& spec);

}  // namespace ctc
