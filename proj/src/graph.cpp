#include "ctc/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

namespace ctc {

Graph Graph::from_edges(NodeId node_count, std::span<const Edge> edges) {
  std::vector<ExternalId> ids(node_count);
  std::iota(ids.begin(), ids.end(), ExternalId{0});
  return from_edges(std::move(ids), edges);
}

Graph Graph::from_edges(std::vector<ExternalId> external_ids,
                        std::span<const Edge> edges) {
  const auto n = static_cast<NodeId>(external_ids.size());
  Graph g;
  g.edges_.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) throw Error("edge endpoint out of range");
    if (e.u == e.v) continue;
    g.edges_.push_back(canonical(e.u, e.v));
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());

  g.offsets_.assign(n + 1, 0);
  for (const auto& e : g.edges_) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.neighbors_.resize(2 * g.edges_.size());
  g.edge_ids_.resize(2 * g.edges_.size());

  // Edges are sorted by (u, v), so filling in edge order leaves every
  // adjacency list sorted: a node's smaller neighbors arrive via edges where
  // it is `v` (ascending u), its larger ones where it is `u` (ascending v),
  // and all of the former precede the latter in key order.
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (EdgeId id = 0; id < g.edges_.size(); ++id) {
    const auto [u, v] = g.edges_[id];
    g.neighbors_[cursor[u]] = v;
    g.edge_ids_[cursor[u]++] = id;
    g.neighbors_[cursor[v]] = u;
    g.edge_ids_[cursor[v]++] = id;
  }

  g.external_ids_ = std::move(external_ids);
  g.internal_of_.reserve(n);
  for (NodeId v = 0; v < n; ++v) {
    if (v > 0 && g.external_ids_[v] <= g.external_ids_[v - 1])
      throw Error("external ids must be strictly increasing");
    g.internal_of_.emplace(g.external_ids_[v], v);
  }
  return g;
}

EdgeId Graph::find_edge(NodeId a, NodeId b) const {
  if (a >= node_count() || b >= node_count()) return kNoEdge;
  if (degree(a) > degree(b)) std::swap(a, b);
  auto nb = neighbors(a);
  auto it = std::lower_bound(nb.begin(), nb.end(), b);
  if (it == nb.end() || *it != b) return kNoEdge;
  return incident_edges(a)[static_cast<std::size_t>(it - nb.begin())];
}

NodeId Graph::internal_id(ExternalId x) const {
  auto it = internal_of_.find(x);
  return it == internal_of_.end() ? kNoNode : it->second;
}

namespace {

bool parse_id(std::string_view tok, ExternalId& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc{} && ptr == tok.data() + tok.size();
}

}  // namespace

Graph load_edge_list(std::istream& in) {
  std::vector<std::pair<ExternalId, ExternalId>> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;

    ExternalId ids[2];
    int count = 0;
    std::string_view rest(line);
    while (true) {
      pos = rest.find_first_not_of(" \t\r");
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos);
      auto end = rest.find_first_of(" \t\r");
      auto tok = rest.substr(0, end);
      if (count == 2) throw ParseError(line_no, "expected two ids per line");
      if (!parse_id(tok, ids[count]))
        throw ParseError(line_no, "malformed id '" + std::string(tok) + "'");
      ++count;
      if (end == std::string_view::npos) break;
      rest.remove_prefix(end);
    }
    if (count != 2) throw ParseError(line_no, "expected two ids per line");
    if (ids[0] != ids[1]) raw.emplace_back(ids[0], ids[1]);
  }

  std::vector<ExternalId> ids;
  ids.reserve(raw.size() * 2);
  for (auto [a, b] : raw) {
    ids.push_back(a);
    ids.push_back(b);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  auto to_internal = [&](ExternalId x) {
    return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), x) - ids.begin());
  };
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (auto [a, b] : raw) edges.push_back({to_internal(a), to_internal(b)});
  return Graph::from_edges(std::move(ids), edges);
}

Graph load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open graph file: " + path);
  return load_edge_list(in);
}

void save_id_map(const Graph& g, std::ostream& out) {
  for (NodeId v = 0; v < g.node_count(); ++v) out << g.external_id(v) << ' ' << v << '\n';
}

std::vector<NodeId> common_neighbors(const Graph& g, NodeId u, NodeId v) {
  std::vector<NodeId> out;
  auto a = g.neighbors(u);
  auto b = g.neighbors(v);
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::uint32_t> edge_support_all(const Graph& g) {
  const auto n = static_cast<NodeId>(g.node_count());
  std::vector<std::uint32_t> support(g.edge_count(), 0);

  // Orient each edge from lower to higher (degree, id) rank; every triangle
  // is then found exactly once from its lowest-ranked vertex.
  auto ranks_before = [&](NodeId a, NodeId b) {
    return g.degree(a) != g.degree(b) ? g.degree(a) < g.degree(b) : a < b;
  };
  std::vector<EdgeId> mark(n, kNoEdge);
  for (NodeId u = 0; u < n; ++u) {
    auto nb = g.neighbors(u);
    auto ids = g.incident_edges(u);
    for (std::size_t i = 0; i < nb.size(); ++i)
      if (ranks_before(u, nb[i])) mark[nb[i]] = ids[i];

    for (std::size_t i = 0; i < nb.size(); ++i) {
      const NodeId v = nb[i];
      if (!ranks_before(u, v)) continue;
      auto vnb = g.neighbors(v);
      auto vids = g.incident_edges(v);
      for (std::size_t j = 0; j < vnb.size(); ++j) {
        const NodeId w = vnb[j];
        if (!ranks_before(v, w) || mark[w] == kNoEdge) continue;
        ++support[ids[i]];
        ++support[vids[j]];
        ++support[mark[w]];
      }
    }
    for (auto w : nb) mark[w] = kNoEdge;
  }
  return support;
}

}  // namespace ctc
