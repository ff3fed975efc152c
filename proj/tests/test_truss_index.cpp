#include <doctest.h>

#include <sstream>

#include "ctc/bfs.hpp"
#include "ctc/oracle.hpp"
#include "ctc/truss_index.hpp"
#include "fixtures.hpp"

using namespace ctc;
using namespace ctc::test;

namespace {

Trussness tau(const Graph& g, const std::vector<Trussness>& t, NodeId u, NodeId v) {
  return t[g.find_edge(u, v)];
}

std::string saved(const Graph& g, const TrussIndex& idx) {
  std::ostringstream os(std::ios::binary);
  save_index(g, idx, os);
  return os.str();
}

// Edges with trussness >= k as a standalone graph on the same node ids.
Graph level_graph(const Graph& g, const std::vector<Trussness>& t, Trussness k) {
  std::vector<Edge> edges;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (t[e] >= k) edges.push_back(g.edge(e));
  return Graph::from_edges(static_cast<NodeId>(g.node_count()), edges);
}

// Unit-capacity undirected max flow between s and t.
int max_flow(const Graph& g, NodeId s, NodeId t) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<int>> cap(n, std::vector<int>(n, 0));
  for (const auto& e : g.edges()) cap[e.u][e.v] = cap[e.v][e.u] = 1;
  int flow = 0;
  for (;;) {
    std::vector<int> parent(n, -1);
    parent[s] = static_cast<int>(s);
    std::vector<NodeId> queue{s};
    for (std::size_t h = 0; h < queue.size() && parent[t] < 0; ++h)
      for (NodeId v = 0; v < n; ++v)
        if (parent[v] < 0 && cap[queue[h]][v] > 0) {
          parent[v] = static_cast<int>(queue[h]);
          queue.push_back(v);
        }
    if (parent[t] < 0) return flow;
    for (NodeId v = t; v != s; v = static_cast<NodeId>(parent[v])) {
      --cap[parent[v]][v];
      ++cap[v][parent[v]];
    }
    ++flow;
  }
}

}  // namespace

TEST_CASE("decomposition fixtures") {
  for (auto t : truss_decompose(g_k4())) CHECK(t == 4);
  for (auto t : truss_decompose(g_bowtie())) CHECK(t == 3);
  for (auto t : truss_decompose(g_c5())) CHECK(t == 2);

  const Graph p = g_k4path();
  const auto t = truss_decompose(p);
  for (NodeId u = 0; u < 4; ++u)
    for (NodeId v = u + 1; v < 4; ++v) CHECK(tau(p, t, u, v) == 4);
  CHECK(tau(p, t, 3, 4) == 2);
  CHECK(tau(p, t, 4, 5) == 2);
  CHECK(truss_decompose(make(3, {})).empty());
}

TEST_CASE("decomposition matches the fixpoint oracle") {
  std::mt19937_64 rng(101);
  const double probs[] = {0.1, 0.3, 0.6};
  for (int trial = 0; trial < 120; ++trial) {
    const Graph g = random_graph(rng, static_cast<NodeId>(uniform(rng, 5, 40)), probs[trial % 3]);
    CHECK(truss_decompose(g) == oracle::truss_decompose(g));
  }
}

TEST_CASE("level structure of random graphs") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 60; ++trial) {
    const Graph g = random_graph(rng, static_cast<NodeId>(uniform(rng, 5, 20)), 0.45);
    const auto t = truss_decompose(g);
    const Trussness top = t.empty() ? 2 : *std::max_element(t.begin(), t.end());
    for (auto x : t) CHECK(x >= 2);
    for (Trussness k = 3; k <= top; ++k) {
      const Graph level = level_graph(g, t, k);
      const Graph below = level_graph(g, t, k - 1);
      // Hierarchy.
      for (const auto& e : level.edges()) CHECK(below.has_edge(e.u, e.v));
      // Core property within the level.
      const auto sup = edge_support_all(level);
      for (auto s : sup) CHECK(s + 2 >= k);
      // Diameter bound and (k-1)-edge-connectivity per component.
      std::vector<char> done(g.node_count(), 0);
      for (NodeId v = 0; v < g.node_count(); ++v) {
        if (done[v] || level.degree(v) == 0) continue;
        const auto seen = reachable(level, v);
        std::vector<NodeId> comp;
        for (NodeId u = 0; u < g.node_count(); ++u)
          if (seen[u]) {
            comp.push_back(u);
            done[u] = 1;
          }
        std::uint32_t diam = 0;
        for (auto u : comp)
          for (auto d : bfs(level, u))
            if (d != kUnreachable) diam = std::max(diam, d);
        CHECK(diam <= (2 * comp.size() - 2) / k);
        for (std::size_t i = 1; i < comp.size(); ++i)
          CHECK(max_flow(level, comp[0], comp[i]) >= static_cast<int>(k) - 1);
      }
    }
  }
}

TEST_CASE("index fixtures") {
  SUBCASE("triangle") {
    const auto idx = TrussIndex::build(g_tri());
    CHECK(idx.max_trussness() == 3);
    for (NodeId v = 0; v < 3; ++v) CHECK(idx.vertex_trussness(v) == 3);
  }
  SUBCASE("shortcut") {
    const auto idx = TrussIndex::build(g_shortcut());
    CHECK(idx.vertex_trussness(4) == 3);
    CHECK(idx.vertex_trussness(0) == 4);
    CHECK(idx.max_trussness() == 4);
    CHECK(std::vector<Trussness>(idx.levels().begin(), idx.levels().end()) ==
          std::vector<Trussness>{4, 3});
  }
  SUBCASE("isolated node") {
    const auto idx = TrussIndex::build(make(3, {{0, 1}}));
    CHECK(idx.vertex_trussness(2) == 0);
    CHECK(idx.sorted_neighbors(2).empty());
  }
}

TEST_CASE("sorted adjacency and level markers") {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph g = random_graph(rng, static_cast<NodeId>(uniform(rng, 5, 40)), 0.35);
    const auto idx = TrussIndex::build(g);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      auto row = idx.sorted_neighbors(v);
      CHECK(row.size() == g.degree(v));
      Trussness best = 0;
      for (std::size_t i = 0; i < row.size(); ++i) {
        CHECK(g.find_edge(v, row[i].node) == row[i].edge);
        best = std::max(best, idx.trussness(row[i].edge));
        if (i == 0) continue;
        const auto a = idx.trussness(row[i - 1].edge), b = idx.trussness(row[i].edge);
        CHECK((a > b || (a == b && row[i - 1].node < row[i].node)));
      }
      CHECK(idx.vertex_trussness(v) == best);
      for (const auto& m : idx.level_markers(v)) {
        CHECK(idx.trussness(row[m.offset].edge) == m.k);
        if (m.offset > 0) CHECK(idx.trussness(row[m.offset - 1].edge) > m.k);
      }
      for (Trussness lo = 2; lo <= idx.max_trussness() + 1; ++lo)
        for (Trussness hi = lo; hi <= idx.max_trussness() + 2; ++hi) {
          std::size_t expect = 0;
          for (const auto& nb : row) {
            const auto t = idx.trussness(nb.edge);
            expect += t >= lo && t < hi;
          }
          const auto slice = idx.neighbors_in_range(v, lo, hi);
          CHECK(slice.size() == expect);
          for (const auto& nb : slice) {
            CHECK(idx.trussness(nb.edge) >= lo);
            CHECK(idx.trussness(nb.edge) < hi);
          }
        }
      for (Trussness k = 2; k <= idx.max_trussness() + 1; ++k) {
        Trussness below = 0;
        for (const auto& nb : row)
          if (idx.trussness(nb.edge) < k) below = std::max(below, idx.trussness(nb.edge));
        CHECK(idx.next_level_below(v, k) == below);
        for (const auto& nb : idx.neighbors_at_least(v, k)) CHECK(idx.trussness(nb.edge) >= k);
      }
    }
  }
}

TEST_CASE("index file") {
  SUBCASE("K4 records") {
    const Graph g = g_k4();
    const std::string bytes = saved(g, TrussIndex::build(g));
    CHECK(bytes.size() == 4 + 4 + 8 + 8 + 6 * 12 + 8);
    CHECK(bytes.substr(0, 4) == "CTCX");
    std::istringstream in(bytes, std::ios::binary);
    const auto rec = read_index(in);
    CHECK(rec.node_count == 4);
    CHECK(rec.edges.size() == 6);
    for (auto t : rec.trussness) CHECK(t == 4);
  }
  SUBCASE("round trip is byte-identical") {
    std::mt19937_64 rng(109);
    for (int trial = 0; trial < 20; ++trial) {
      const Graph g = random_graph(rng, static_cast<NodeId>(uniform(rng, 2, 50)), 0.3);
      const auto idx = TrussIndex::build(g);
      const std::string first = saved(g, idx);
      std::istringstream in(first, std::ios::binary);
      const auto loaded = load_index(in, g);
      CHECK(saved(g, loaded) == first);
      CHECK(std::equal(loaded.edge_trussness().begin(), loaded.edge_trussness().end(),
                       idx.edge_trussness().begin(), idx.edge_trussness().end()));
      CHECK(saved(g, TrussIndex::build(g)) == first);
    }
  }
  SUBCASE("corruption is detected") {
    const Graph g = g_2k4();
    const std::string good = saved(g, TrussIndex::build(g));
    auto reject = [&](std::string bytes) {
      std::istringstream in(bytes, std::ios::binary);
      CHECK_THROWS_AS(read_index(in), IndexFormatError);
    };
    std::string bad = good;
    bad[0] = 'X';
    reject(bad);
    bad = good;
    bad[4] = 2;  // version
    reject(bad);
    reject(good.substr(0, good.size() - 3));
    reject(good.substr(0, 10));
    bad = good;
    bad[30] ^= 1;  // record byte
    reject(bad);
    reject(good + "x");
  }
  SUBCASE("index of another graph is refused") {
    const std::string other = saved(g_k4(), TrussIndex::build(g_k4()));
    std::istringstream in(other, std::ios::binary);
    CHECK_THROWS_AS(load_index(in, g_k4path()), IndexMismatch);
  }
}
