#pragma once

#include <span>
#include <vector>

#include "ctc/graph.hpp"

namespace ctc::oracle {

// Brute-force references for small graphs. Nothing here shares code with
// the peeling, index or search paths.

inline constexpr std::size_t kMaxDecomposeNodes = 256;
inline constexpr std::size_t kMaxEnumerationNodes = 16;

/// Trussness per edge id by fixpoint deletion at every level.
std::vector<Trussness> truss_decompose(const Graph& g);

/// Largest k whose k-truss fixpoint holds all of Q in one component.
/// Throws NoCommunity.
Trussness max_k(const Graph& g, std::span<const NodeId> query);

struct Community {
  std::vector<NodeId> nodes;  // ascending
  std::vector<EdgeId> edges;  // ascending
  std::uint32_t diameter = 0;
  std::uint32_t query_distance = 0;
};

struct Answer {
  Trussness k_opt = 0;
  std::uint32_t diam_opt = 0;
  std::uint32_t min_query_distance = 0;
  Community witness;            // min diameter, lexicographically smallest node set
  Community min_qd_witness;     // min query distance
  Community maximal_optimal;    // min diameter, inclusion-maximal
};

/// Exact closest truss community by enumerating node subsets S containing
/// Q: each S contributes Q's component of the k-truss fixpoint of G[S].
Answer ctc(const Graph& g, std::span<const NodeId> query);

/// Minimum graph query distance over connected k-trusses containing Q.
std::uint32_t min_query_distance(const Graph& g, std::span<const NodeId> query, Trussness k);

/// Every distinct minimum-diameter connected k-truss at the graph's top
/// trussness, as found by the same subset enumeration with Q empty.
std::vector<Community> query_independent_optima(const Graph& g);

}  // namespace ctc::oracle
