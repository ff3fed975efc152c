#include "ctc/eval.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

namespace ctc {

double edge_density(std::size_t nodes, std::size_t edges) {
  if (nodes < 2) throw Error("edge density needs at least two nodes");
  const double n = static_cast<double>(nodes);
  return 2.0 * static_cast<double>(edges) / (n * (n - 1));
}

double size_ratio(std::size_t result_nodes, std::size_t g0_nodes) {
  if (g0_nodes == 0) throw Error("size ratio against an empty G0");
  return static_cast<double>(result_nodes) / static_cast<double>(g0_nodes);
}

// ---- ground truth -----------------------------------------------------------

GroundTruth::GroundTruth(std::vector<std::vector<ExternalId>> communities) {
  for (auto& c : communities) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    if (c.empty()) continue;
    for (auto id : c) membership_[id].push_back(communities_.size());
    communities_.push_back(std::move(c));
  }
}

std::vector<std::size_t> GroundTruth::containing(std::span<const ExternalId> ids) const {
  if (ids.empty()) return {};
  auto it = membership_.find(ids.front());
  if (it == membership_.end()) return {};
  std::vector<std::size_t> out;
  for (auto c : it->second) {
    const auto& members = communities_[c];
    if (std::all_of(ids.begin(), ids.end(), [&](ExternalId x) {
          return std::binary_search(members.begin(), members.end(), x);
        }))
      out.push_back(c);
  }
  return out;
}

std::optional<Scores> GroundTruth::best_match(std::span<const ExternalId> query,
                                              std::span<const ExternalId> found) const {
  std::optional<Scores> best;
  for (auto c : containing(query)) {
    const auto s = f1_score<ExternalId>(found, communities_[c]);
    if (!best || s.f1 > best->f1) best = s;
  }
  return best;
}

GroundTruth load_ground_truth(std::istream& in) {
  std::vector<std::vector<ExternalId>> communities;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    std::vector<ExternalId> ids;
    while (fields >> token) {
      if (ids.empty() && token.front() == '#') break;
      ExternalId x = 0;
      auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), x);
      if (ec != std::errc{} || p != token.data() + token.size())
        throw ParseError(line_no, "bad node id '" + token + "'");
      ids.push_back(x);
    }
    if (!ids.empty()) communities.push_back(std::move(ids));
  }
  return GroundTruth(std::move(communities));
}

GroundTruth load_ground_truth_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return load_ground_truth(in);
}

ResolvedTruth resolve(const GroundTruth& truth, const Graph& g) {
  ResolvedTruth r;
  for (const auto& c : truth.communities()) {
    std::vector<NodeId> ids;
    for (auto x : c) {
      const NodeId v = g.internal_id(x);
      if (v == kNoNode) ++r.dropped_ids;
      else ids.push_back(v);
    }
    if (ids.empty()) {
      ++r.dropped_communities;
      continue;
    }
    std::sort(ids.begin(), ids.end());
    r.communities.push_back(std::move(ids));
  }
  return r;
}

// ---- workloads --------------------------------------------------------------

void validate(const WorkloadParams& p) {
  if (p.size == 0) throw Error("query size must be at least 1");
  if (!(p.fraction > 0 && p.fraction <= 1)) throw Error("degree fraction must be in (0, 1]");
  if (p.inter_distance == 0) throw Error("inter-distance must be at least 1");
}

std::vector<NodeId> degree_rank_pool(const Graph& g, double fraction) {
  const std::size_t n = g.node_count();
  if (n == 0) return {};
  std::vector<std::size_t> degrees(n);
  for (NodeId v = 0; v < n; ++v) degrees[v] = g.degree(v);
  std::sort(degrees.begin(), degrees.end());
  auto rank = static_cast<std::size_t>((1.0 - fraction) * static_cast<double>(n));
  const std::size_t threshold = std::max<std::size_t>(1, degrees[std::min(rank, n - 1)]);
  std::vector<NodeId> pool;
  for (NodeId v = 0; v < n; ++v)
    if (g.degree(v) >= threshold) pool.push_back(v);
  return pool;
}

namespace {

// Uniform in [0, bound) without modulo bias, independent of the standard
// library's distribution implementations.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t floor = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= floor) return x % bound;
  }
}

// Nodes within `radius` hops of `source`, with their depth stamped in `depth`.
class Ball {
 public:
  explicit Ball(std::size_t n) : depth_(n, kUnreachable) {}

  const std::vector<NodeId>& grow(const Graph& g, NodeId source, std::uint32_t radius) {
    for (auto v : members_) depth_[v] = kUnreachable;
    members_.assign(1, source);
    depth_[source] = 0;
    for (std::size_t head = 0; head < members_.size(); ++head) {
      const NodeId v = members_[head];
      if (depth_[v] == radius) continue;
      for (auto u : g.neighbors(v)) {
        if (depth_[u] != kUnreachable) continue;
        depth_[u] = depth_[v] + 1;
        members_.push_back(u);
      }
    }
    return members_;
  }
  bool contains(NodeId v) const { return depth_[v] != kUnreachable; }

 private:
  DistanceField depth_;
  std::vector<NodeId> members_;
};

}  // namespace

std::vector<std::vector<NodeId>> gen_queries(const Graph& g, const WorkloadParams& p,
                                             const GroundTruth* truth) {
  validate(p);
  if (p.unique_truth && truth == nullptr) throw Error("uniqueness filter needs ground truth");
  const auto pool = degree_rank_pool(g, p.fraction);
  if (pool.empty()) throw WorkloadInfeasible("no node passes the degree filter");
  std::vector<char> in_pool(g.node_count(), 0);
  for (auto v : pool) in_pool[v] = 1;

  std::mt19937_64 rng(p.seed);
  Ball anchor_ball(g.node_count()), check_ball(g.node_count());
  std::vector<std::vector<NodeId>> out;
  std::size_t rejections = 0;
  auto reject = [&] {
    if (++rejections >= kMaxConsecutiveRejections)
      throw WorkloadInfeasible("10000 consecutive candidate query sets rejected");
  };

  while (out.size() < p.count) {
    const NodeId anchor = pool[draw(rng, pool.size())];
    std::vector<NodeId> near;
    for (auto v : anchor_ball.grow(g, anchor, p.inter_distance))
      if (v != anchor && in_pool[v]) near.push_back(v);
    std::sort(near.begin(), near.end());
    if (near.size() + 1 < p.size) {
      reject();
      continue;
    }
    // Partial Fisher-Yates over the candidates near the anchor.
    std::vector<NodeId> query{anchor};
    for (std::size_t i = 0; query.size() < p.size; ++i) {
      const std::size_t j = i + draw(rng, near.size() - i);
      std::swap(near[i], near[j]);
      query.push_back(near[i]);
    }
    bool ok = true;
    for (std::size_t i = 1; ok && i + 1 < query.size(); ++i) {
      check_ball.grow(g, query[i], p.inter_distance);
      for (std::size_t j = i + 1; ok && j < query.size(); ++j) ok = check_ball.contains(query[j]);
    }
    std::sort(query.begin(), query.end());
    if (ok && p.unique_truth) {
      std::vector<ExternalId> ext;
      for (auto v : query) ext.push_back(g.external_id(v));
      ok = truth->containing(ext).size() == 1;
    }
    if (!ok) {
      reject();
      continue;
    }
    rejections = 0;
    out.push_back(std::move(query));
  }
  return out;
}

namespace {

std::string format_double(double x) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

template <class T>
T parse_number(const std::string& s, const std::string& field) {
  T x{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw Error("bad workload header value for " + field + ": '" + s + "'");
  return x;
}

}  // namespace

void write_workload(std::ostream& out, const Graph& g, const WorkloadParams& p,
                    const std::vector<std::vector<NodeId>>& queries) {
  out << "#seed " << p.seed << '\n'
      << "#params size=" << p.size << " fraction=" << format_double(p.fraction)
      << " inter_distance=" << p.inter_distance << " count=" << p.count
      << " unique=" << (p.unique_truth ? 1 : 0) << '\n';
  for (const auto& q : queries) {
    for (std::size_t i = 0; i < q.size(); ++i) out << (i ? " " : "") << g.external_id(q[i]);
    out << '\n';
  }
}

Workload read_workload(std::istream& in) {
  Workload w;
  WorkloadParams p;
  bool have_seed = false, have_params = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    if (token == "#seed") {
      std::string v;
      fields >> v;
      p.seed = parse_number<std::uint64_t>(v, "seed");
      have_seed = true;
      continue;
    }
    if (token == "#params") {
      while (fields >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "bad workload header");
        const std::string key = token.substr(0, eq), value = token.substr(eq + 1);
        if (key == "size") p.size = parse_number<std::size_t>(value, key);
        else if (key == "fraction") p.fraction = parse_number<double>(value, key);
        else if (key == "inter_distance") p.inter_distance = parse_number<std::uint32_t>(value, key);
        else if (key == "count") p.count = parse_number<std::size_t>(value, key);
        else if (key == "unique") p.unique_truth = parse_number<int>(value, key) != 0;
        else throw ParseError(line_no, "unknown workload header field '" + key + "'");
      }
      have_params = true;
      continue;
    }
    if (token.front() == '#') continue;
    std::vector<ExternalId> q;
    do {
      ExternalId x = 0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), x);
      if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ParseError(line_no, "bad node id '" + token + "'");
      q.push_back(x);
    } while (fields >> token);
    w.queries.push_back(std::move(q));
  }
  if (have_seed && have_params) w.params = p;
  return w;
}

}  // namespace ctc
