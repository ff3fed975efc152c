#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctc/bfs.hpp"
#include "ctc/truss_index.hpp"

namespace ctc {

enum class Algorithm { kBasic, kBulkDelete, kLocal, kOracle };

std::string_view algorithm_name(Algorithm a);
/// Accepts "basic", "bd", "lctc", "oracle".
std::optional<Algorithm> parse_algorithm(std::string_view name);

inline constexpr double kDefaultEta = 1000;
inline constexpr double kDefaultGamma = 3;
inline constexpr double kDefaultBudgetSecs = 3600;

struct QuerySpec {
  std::vector<NodeId> query_nodes;
  std::size_t eta = static_cast<std::size_t>(kDefaultEta);
  double gamma = kDefaultGamma;
  std::chrono::duration<double> time_budget{kDefaultBudgetSecs};
  std::uint64_t rng_seed = 0;
};

/// Sorts and checks Q against g. Throws NoCommunity for an empty set,
/// duplicates, unknown ids or edgeless nodes.
std::vector<NodeId> normalize_query(const Graph& g, std::span<const NodeId> query);

struct IterationRecord {
  std::uint32_t query_distance;  // graph query distance of the snapshot
  std::size_t removed_nodes;     // nodes removed by this iteration
};

/// Answer of one search. Node and edge ids are internal; map them through
/// Graph::external_id for output.
struct CommunityResult {
  Algorithm algorithm = Algorithm::kBasic;
  Trussness k = 0;
  std::vector<NodeId> nodes;  // ascending
  std::vector<EdgeId> edges;  // ascending
  std::uint32_t query_distance = 0;
  std::uint32_t diameter = 0;
  std::size_t iterations = 0;
  std::size_t g0_nodes = 0;   // |V(G0)| of the graph the peeling started from
  std::size_t chosen_snapshot = 0;
  bool partial = false;       // time budget hit; best snapshot so far
  bool expanded_eta = false;  // local search needed a larger eta
  std::chrono::duration<double> elapsed{0};
  std::vector<IterationRecord> log;
  RemovalLog removals;
};

// --- building blocks -------------------------------------------------------

struct G0Result {
  Trussness k;
  GraphOverlay g0;
};

/// Maximal connected k-truss containing Q with the largest k, found by
/// level-descending expansion over the truss index. Supports in the
/// returned overlay are counted within G0. Throws NoCommunity.
G0Result find_g0(const Graph& g, const TrussIndex& idx, std::span<const NodeId> query);

struct MaintainOutcome {
  bool feasible;              // still a connected k-truss containing Q
  std::size_t removed_nodes;  // including the requested ones
};

/// Deletes `removed` and restores the k-truss property: edges whose support
/// drops below k-2 cascade out, isolated nodes go, and everything outside
/// Q's component is dropped. Returns infeasible (leaving the overlay in its
/// terminal state) when a query node is lost or Q splits.
MaintainOutcome truss_maintain(GraphOverlay& ov, std::span<const NodeId> removed, Trussness k,
                               std::span<const NodeId> query);

struct QueryDistances {
  DistanceField max_dist;             // dist(v, Q); kUnreachable for dead nodes
  std::vector<std::uint64_t> sum_dist;  // sum over q of dist(v, q)
  std::uint32_t graph_distance = 0;   // max over live v
};

/// One BFS per query node, merged by per-node max. Q must be connected.
QueryDistances query_distance_all(const GraphOverlay& ov, std::span<const NodeId> query);

// --- searches --------------------------------------------------------------

CommunityResult basic_search(const Graph& g, const TrussIndex& idx, const QuerySpec& spec);
CommunityResult bulk_delete_search(const Graph& g, const TrussIndex& idx, const QuerySpec& spec);

/// Shell rule for the peeling loop.
enum class ShellRule {
  kSingleFarthest,  // one node of max query distance (Basic)
  kBulk,            // all nodes with dist >= d - 1 (BulkDelete)
  kBulkFarthestSum, // within dist >= d, those of max summed distance (local)
};

/// Runs the peeling loop on an already-feasible k-truss overlay.
CommunityResult peel_community(const Graph& g, GraphOverlay start, Trussness k,
                               std::span<const NodeId> query, ShellRule rule,
                               std::chrono::steady_clock::time_point deadline);

/// Overlay state of snapshot i of a finished search.
GraphOverlay snapshot_restore(const Graph& g, const RemovalLog& log, std::size_t i);

// --- validation ------------------------------------------------------------

struct CommunityCheck {
  bool contains_query = false;
  bool connected = false;
  bool truss = false;            // every edge has support >= k - 2 within the community
  bool distance_sandwich = false;  // dist <= diam <= 2 dist
  bool diameter_bound = false;   // diam <= floor((2n - 2) / k)
  std::uint32_t diameter = 0;
  std::uint32_t query_distance = 0;

  bool ok() const { return contains_query && connected && truss && distance_sandwich && diameter_bound; }
  std::string describe() const;
};

/// Independent re-check of a community given as a base-graph edge set.
CommunityCheck check_community(const Graph& g, std::span<const EdgeId> edges,
                               std::span<const NodeId> query, Trussness k);

}  // namespace ctc
