#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "ctc/overlay.hpp"

namespace ctc {

/// Trussness per base edge id for every edge of `g`.
std::vector<Trussness> truss_decompose(const Graph& g);

/// Trussness of each live edge of `ov`, computed within the live subgraph
/// only. Dead edges get 0.
std::vector<Trussness> truss_decompose(const GraphOverlay& ov);

struct LevelMarker {
  Trussness k;
  std::uint32_t offset;  // first slot in the node's sorted row with trussness k
};

struct TrussNeighbor {
  NodeId node;
  EdgeId edge;
};

/// Per-edge trussness plus, for every node, its neighbors ordered by
/// (edge trussness desc, neighbor id asc) with a start marker per level.
class TrussIndex {
 public:
  TrussIndex() = default;

  static TrussIndex build(const Graph& g);
  /// Assembles the index from precomputed trussness (one value per edge id).
  static TrussIndex from_trussness(const Graph& g, std::vector<Trussness> trussness);

  std::size_t node_count() const { return vertex_trussness_.size(); }
  std::size_t edge_count() const { return trussness_.size(); }

  Trussness trussness(EdgeId e) const { return trussness_[e]; }
  std::span<const Trussness> edge_trussness() const { return trussness_; }
  /// Max incident edge trussness; 0 for an isolated node.
  Trussness vertex_trussness(NodeId v) const { return vertex_trussness_[v]; }
  /// Max edge trussness in the graph (0 if edgeless).
  Trussness max_trussness() const { return max_trussness_; }
  /// Distinct edge trussness values, descending.
  std::span<const Trussness> levels() const { return levels_; }

  std::span<const TrussNeighbor> sorted_neighbors(NodeId v) const {
    return {rows_.data() + offsets_[v], rows_.data() + offsets_[v + 1]};
  }
  std::span<const LevelMarker> level_markers(NodeId v) const {
    return {markers_.data() + marker_offsets_[v], markers_.data() + marker_offsets_[v + 1]};
  }
  /// Incident edges with lo <= trussness < hi, as a contiguous slice.
  std::span<const TrussNeighbor> neighbors_in_range(NodeId v, Trussness lo, Trussness hi) const;
  /// Incident edges with trussness >= k.
  std::span<const TrussNeighbor> neighbors_at_least(NodeId v, Trussness k) const;
  /// Highest incident level strictly below k, or 0.
  Trussness next_level_below(NodeId v, Trussness k) const;

 private:
  std::vector<Trussness> trussness_;
  std::vector<Trussness> vertex_trussness_;
  Trussness max_trussness_ = 0;
  std::vector<Trussness> levels_;
  std::vector<std::size_t> offsets_;
  std::vector<TrussNeighbor> rows_;
  std::vector<std::size_t> marker_offsets_;
  std::vector<LevelMarker> markers_;
};

// Index file, little-endian:
//   "CTCX" | u32 version=1 | u64 n | u64 m | m x (u32 u, u32 v, u32 tau)
//   sorted by canonical key | u64 FNV-1a over the record bytes.

inline constexpr std::uint32_t kIndexVersion = 1;

void save_index(const Graph& g, const TrussIndex& idx, std::ostream& out);

/// Raw contents of an index file.
struct IndexRecords {
  std::uint64_t node_count = 0;
  std::vector<Edge> edges;
  std::vector<Trussness> trussness;
};

/// Parses and checksum-verifies an index file. Throws IndexFormatError.
IndexRecords read_index(std::istream& in);

/// Reads an index and rebuilds it against `g`. Throws IndexMismatch when the
/// records do not describe exactly g's edge set.
TrussIndex load_index(std::istream& in, const Graph& g);

std::uint64_t fnv1a64(std::span<const unsigned char> bytes);

}  // namespace ctc
