#pragma once

#include <algorithm>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "ctc/bfs.hpp"
#include "ctc/graph.hpp"

namespace ctc {

struct Scores {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

/// precision = |found ∩ truth| / |found|, recall = |found ∩ truth| / |truth|.
/// Inputs need not be sorted; duplicates are ignored. Throws Error on an
/// empty set.
template <class Id>
Scores f1_score(std::span<const Id> found, std::span<const Id> truth) {
  if (found.empty() || truth.empty()) throw Error("f1 of an empty set");
  std::vector<Id> a(found.begin(), found.end()), b(truth.begin(), truth.end());
  for (auto* s : {&a, &b}) {
    std::sort(s->begin(), s->end());
    s->erase(std::unique(s->begin(), s->end()), s->end());
  }
  std::size_t common = 0;
  for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
    if (a[i] < b[j]) ++i;
    else if (b[j] < a[i]) ++j;
    else ++common, ++i, ++j;
  }
  Scores s;
  if (common == 0) return s;
  s.precision = static_cast<double>(common) / static_cast<double>(a.size());
  s.recall = static_cast<double>(common) / static_cast<double>(b.size());
  s.f1 = 2 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

/// 2|E| / (|V| (|V| - 1)). Throws Error below two nodes.
double edge_density(std::size_t nodes, std::size_t edges);

/// |V(R)| / |V(G0)|. Throws Error if g0_nodes is zero.
double size_ratio(std::size_t result_nodes, std::size_t g0_nodes);

// --- ground truth ------------------------------------------------------------

/// Communities in external ids, one per line of a SNAP cmty file.
class GroundTruth {
 public:
  GroundTruth() = default;
  explicit GroundTruth(std::vector<std::vector<ExternalId>> communities);

  const std::vector<std::vector<ExternalId>>& communities() const { return communities_; }
  std::size_t size() const { return communities_.size(); }

  /// Indices of the communities holding every id in `ids`.
  std::vector<std::size_t> containing(std::span<const ExternalId> ids) const;

  /// Best F1 of `found` against the communities containing the query.
  /// nullopt if no community contains the whole query.
  std::optional<Scores> best_match(std::span<const ExternalId> query,
                                   std::span<const ExternalId> found) const;

 private:
  std::vector<std::vector<ExternalId>> communities_;  // each sorted, unique
  std::unordered_map<ExternalId, std::vector<std::size_t>> membership_;
};

/// Blank and '#' lines skipped; empty communities never arise.
GroundTruth load_ground_truth(std::istream& in);
GroundTruth load_ground_truth_file(const std::string& path);

struct ResolvedTruth {
  std::vector<std::vector<NodeId>> communities;  // internal ids, sorted
  std::size_t dropped_ids = 0;          // ids unknown to the graph
  std::size_t dropped_communities = 0;  // communities left empty
};

ResolvedTruth resolve(const GroundTruth& truth, const Graph& g);

// --- query workloads -------------------------------------------------------

struct WorkloadParams {
  std::size_t size = 3;            // |Q|
  double fraction = 0.8;           // degree rank: top fraction of nodes
  std::uint32_t inter_distance = 2;
  std::size_t count = 100;
  std::uint64_t seed = 0;
  bool unique_truth = false;       // Q must lie in exactly one community

  friend bool operator==(const WorkloadParams&, const WorkloadParams&) = default;
};

/// Throws Error on size 0, fraction outside (0, 1], or inter_distance 0.
void validate(const WorkloadParams& p);

/// Nodes with degree at least the degree found at rank (1 - fraction) of the
/// ascending degree order, excluding isolated nodes. Ascending.
std::vector<NodeId> degree_rank_pool(const Graph& g, double fraction);

/// Seeded rejection sampling: an anchor drawn uniformly from the pool, the
/// rest uniformly from pool nodes within inter_distance of it; a set is kept
/// when every pair is within inter_distance. Each query is sorted. Throws
/// WorkloadInfeasible after 10,000 consecutive rejections. `truth` is
/// required when p.unique_truth is set.
std::vector<std::vector<NodeId>> gen_queries(const Graph& g, const WorkloadParams& p,
                                             const GroundTruth* truth = nullptr);

inline constexpr std::size_t kMaxConsecutiveRejections = 10000;

struct Workload {
  std::optional<WorkloadParams> params;  // from the header, when present
  std::vector<std::vector<ExternalId>> queries;
};

/// Header "#seed <s>" and "#params size=.. fraction=.. inter_distance=..
/// count=.. unique=..", then one query per line in external ids.
void write_workload(std::ostream& out, const Graph& g, const WorkloadParams& p,
                    const std::vector<std::vector<NodeId>>& queries);
Workload read_workload(std::istream& in);

}  // namespace ctc
