#include "ctc/truss_index.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>

namespace ctc {

namespace {

// Bucket-queue peeling (Wang & Cheng style). Edges are laid out in `order`
// sorted by current support; bin_start[s] is the first slot whose edge has
// support s. Processing an edge fixes its trussness at support + 2 and
// removes it; each triangle it closes lowers the support of the two other
// unprocessed edges, but never below the level being peeled.
std::vector<Trussness> peel(const GraphOverlay& ov) {
  const Graph& g = ov.base();
  const std::size_t m = g.edge_count();
  std::vector<Trussness> trussness(m, 0);

  std::vector<EdgeId> order = ov.live_edges();
  if (order.empty()) return trussness;

  std::vector<std::uint32_t> sup(m, 0);
  std::uint32_t max_sup = 0;
  for (auto e : order) {
    sup[e] = ov.support(e);
    max_sup = std::max(max_sup, sup[e]);
  }

  // Counting sort, stable in edge id, so ties start in canonical key order.
  std::vector<std::size_t> bin_start(max_sup + 2, 0);
  for (auto e : order) ++bin_start[sup[e] + 1];
  for (std::size_t s = 1; s < bin_start.size(); ++s) bin_start[s] += bin_start[s - 1];
  {
    std::vector<std::size_t> fill(bin_start.begin(), bin_start.end() - 1);
    std::vector<EdgeId> sorted(order.size());
    for (auto e : order) sorted[fill[sup[e]]++] = e;
    order = std::move(sorted);
  }
  std::vector<std::size_t> pos(m, 0);
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;

  std::vector<char> done(m, 0);
  auto lower = [&](EdgeId f) {
    const std::uint32_t s = sup[f];
    const std::size_t first = bin_start[s];
    const EdgeId other = order[first];
    if (other != f) {
      std::swap(order[first], order[pos[f]]);
      pos[other] = pos[f];
      pos[f] = first;
    }
    ++bin_start[s];
    --sup[f];
  };

  for (std::size_t i = 0; i < order.size(); ++i) {
    const EdgeId e = order[i];
    const std::uint32_t level = sup[e];
    trussness[e] = level + 2;
    done[e] = 1;
    // Slot i leaves its bin; keep the bin boundary from trailing behind.
    if (bin_start[level] <= i) bin_start[level] = i + 1;

    const auto [u, v] = g.edge(e);
    ov.for_each_triangle(u, v, [&](NodeId, EdgeId uw, EdgeId vw) {
      if (done[uw] || done[vw]) return;
      if (sup[uw] > level) lower(uw);
      if (sup[vw] > level) lower(vw);
    });
  }
  return trussness;
}

}  // namespace

std::vector<Trussness> truss_decompose(const GraphOverlay& ov) { return peel(ov); }

std::vector<Trussness> truss_decompose(const Graph& g) { return peel(GraphOverlay(g)); }

TrussIndex TrussIndex::build(const Graph& g) { return from_trussness(g, truss_decompose(g)); }

TrussIndex TrussIndex::from_trussness(const Graph& g, std::vector<Trussness> trussness) {
  if (trussness.size() != g.edge_count()) throw Error("trussness size does not match graph");
  TrussIndex idx;
  const auto n = static_cast<NodeId>(g.node_count());
  idx.trussness_ = std::move(trussness);
  idx.vertex_trussness_.assign(n, 0);
  idx.offsets_.assign(n + 1, 0);
  idx.rows_.reserve(2 * g.edge_count());
  idx.marker_offsets_.assign(n + 1, 0);

  for (NodeId v = 0; v < n; ++v) {
    idx.offsets_[v] = idx.rows_.size();
    auto nb = g.neighbors(v);
    auto ids = g.incident_edges(v);
    const std::size_t begin = idx.rows_.size();
    for (std::size_t i = 0; i < nb.size(); ++i) idx.rows_.push_back({nb[i], ids[i]});
    std::sort(idx.rows_.begin() + static_cast<std::ptrdiff_t>(begin), idx.rows_.end(),
              [&](const TrussNeighbor& a, const TrussNeighbor& b) {
                const auto ta = idx.trussness_[a.edge], tb = idx.trussness_[b.edge];
                return ta != tb ? ta > tb : a.node < b.node;
              });

    idx.marker_offsets_[v] = idx.markers_.size();
    for (std::size_t i = begin; i < idx.rows_.size(); ++i) {
      const Trussness t = idx.trussness_[idx.rows_[i].edge];
      if (i == begin || t != idx.trussness_[idx.rows_[i - 1].edge])
        idx.markers_.push_back({t, static_cast<std::uint32_t>(i - begin)});
    }
    if (!nb.empty()) idx.vertex_trussness_[v] = idx.trussness_[idx.rows_[begin].edge];
  }
  idx.offsets_[n] = idx.rows_.size();
  idx.marker_offsets_[n] = idx.markers_.size();

  std::vector<Trussness> levels(idx.trussness_.begin(), idx.trussness_.end());
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  idx.levels_ = std::move(levels);
  idx.max_trussness_ = idx.levels_.empty() ? 0 : idx.levels_.front();
  return idx;
}

std::span<const TrussNeighbor> TrussIndex::neighbors_in_range(NodeId v, Trussness lo,
                                                              Trussness hi) const {
  auto row = sorted_neighbors(v);
  auto markers = level_markers(v);
  std::size_t begin = row.size(), end = row.size();
  for (const auto& mk : markers) {
    if (mk.k < hi && begin == row.size()) begin = mk.offset;
    if (mk.k < lo) {
      end = mk.offset;
      break;
    }
  }
  if (begin >= end) return {};
  return row.subspan(begin, end - begin);
}

std::span<const TrussNeighbor> TrussIndex::neighbors_at_least(NodeId v, Trussness k) const {
  return neighbors_in_range(v, k, std::numeric_limits<Trussness>::max());
}

Trussness TrussIndex::next_level_below(NodeId v, Trussness k) const {
  for (const auto& mk : level_markers(v))
    if (mk.k < k) return mk.k;
  return 0;
}

// --- persistence -----------------------------------------------------------

namespace {

constexpr std::array<char, 4> kMagic{'C', 'T', 'C', 'X'};

template <class T>
void put_le(std::vector<unsigned char>& buf, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i)
    buf.push_back(static_cast<unsigned char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff));
}

template <class T>
T get_le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= std::uint64_t{p[i]} << (8 * i);
  return static_cast<T>(v);
}

void read_exact(std::istream& in, unsigned char* dst, std::size_t n, const char* what) {
  in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n)
    throw IndexFormatError(std::string("truncated index file (") + what + ")");
}

}  // namespace

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void save_index(const Graph& g, const TrussIndex& idx, std::ostream& out) {
  std::vector<unsigned char> header;
  header.insert(header.end(), kMagic.begin(), kMagic.end());
  put_le<std::uint32_t>(header, kIndexVersion);
  put_le<std::uint64_t>(header, g.node_count());
  put_le<std::uint64_t>(header, g.edge_count());

  std::vector<unsigned char> records;
  records.reserve(12 * g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    put_le<std::uint32_t>(records, g.edge(e).u);
    put_le<std::uint32_t>(records, g.edge(e).v);
    put_le<std::uint32_t>(records, idx.trussness(e));
  }
  std::vector<unsigned char> trailer;
  put_le<std::uint64_t>(trailer, fnv1a64(records));

  for (const auto* buf : {&header, &records, &trailer})
    out.write(reinterpret_cast<const char*>(buf->data()), static_cast<std::streamsize>(buf->size()));
  if (!out) throw Error("failed writing index");
}

IndexRecords read_index(std::istream& in) {
  unsigned char header[24];
  read_exact(in, header, sizeof header, "header");
  if (!std::equal(kMagic.begin(), kMagic.end(), reinterpret_cast<const char*>(header)))
    throw IndexFormatError("bad magic");
  if (get_le<std::uint32_t>(header + 4) != kIndexVersion)
    throw IndexFormatError("unsupported index version");

  IndexRecords out;
  out.node_count = get_le<std::uint64_t>(header + 8);
  const auto m = get_le<std::uint64_t>(header + 16);
  if (m > (std::uint64_t{1} << 34)) throw IndexFormatError("implausible edge count");

  std::vector<unsigned char> records(12 * m);
  read_exact(in, records.data(), records.size(), "records");
  unsigned char trailer[8];
  read_exact(in, trailer, sizeof trailer, "checksum");
  if (get_le<std::uint64_t>(trailer) != fnv1a64(records))
    throw IndexFormatError("checksum mismatch");
  if (in.peek() != std::char_traits<char>::eof())
    throw IndexFormatError("trailing bytes after checksum");

  out.edges.reserve(m);
  out.trussness.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) {
    const unsigned char* p = records.data() + 12 * i;
    Edge e{get_le<std::uint32_t>(p), get_le<std::uint32_t>(p + 4)};
    if (e.u >= e.v || e.v >= out.node_count) throw IndexFormatError("invalid edge record");
    if (i > 0 && !(out.edges.back() < e)) throw IndexFormatError("records not sorted");
    out.edges.push_back(e);
    out.trussness.push_back(get_le<std::uint32_t>(p + 8));
  }
  return out;
}

TrussIndex load_index(std::istream& in, const Graph& g) {
  IndexRecords rec = read_index(in);
  if (rec.node_count != g.node_count() || rec.edges.size() != g.edge_count())
    throw IndexMismatch("index size does not match graph");
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (rec.edges[e] != g.edge(e)) throw IndexMismatch("index edge set does not match graph");
  return TrussIndex::from_trussness(g, std::move(rec.trussness));
}

}  // namespace ctc
