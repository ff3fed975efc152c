// Acceptance suite: one PASS/FAIL/SKIP line per criterion, exit status 1 on
// any failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include "ctc/eval.hpp"
#include "ctc/local_search.hpp"
#include "ctc/oracle.hpp"
#include "ctc/search.hpp"
#include "fixtures.hpp"

#ifndef CTC_TOOL_PATH
#error "CTC_TOOL_PATH must name the ctc executable"
#endif

using namespace ctc;
using namespace ctc::test;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

enum class Outcome { kPass, kFail, kSkip };

struct Report {
  Outcome outcome;
  std::string detail;
};

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

QuerySpec spec_of(const std::vector<NodeId>& q) {
  QuerySpec s;
  s.query_nodes = q;
  return s;
}

// Structural checks shared by every criterion that produces communities.
struct InvariantTally {
  std::size_t checked = 0;
  std::vector<std::string> failures;

  void add(const Graph& g, const CommunityResult& r, const std::vector<NodeId>& q,
           const char* where) {
    ++checked;
    const auto c = check_community(g, r.edges, q, r.k);
    const bool nodes_match = [&] {
      std::vector<NodeId> from_edges;
      for (auto e : r.edges) {
        from_edges.push_back(g.edge(e).u);
        from_edges.push_back(g.edge(e).v);
      }
      std::sort(from_edges.begin(), from_edges.end());
      from_edges.erase(std::unique(from_edges.begin(), from_edges.end()), from_edges.end());
      return from_edges == r.nodes;
    }();
    if (!c.ok() || !nodes_match || c.diameter != r.diameter || c.query_distance != r.query_distance)
      failures.push_back(std::string(where) + ": " + c.describe());
  }
};

InvariantTally invariants;

// A suite instance: graph plus a query lying in one of its components.
struct Instance {
  Graph g;
  std::vector<NodeId> q;
};

std::vector<Instance> make_suite(std::uint64_t seed, std::size_t count, NodeId min_n, NodeId max_n,
                                 std::initializer_list<double> probs) {
  std::mt19937_64 rng(seed);
  const std::vector<double> ps(probs);
  std::vector<Instance> out;
  while (out.size() < count) {
    const auto n = static_cast<NodeId>(uniform(rng, min_n, max_n));
    Graph g = random_graph(rng, n, ps[out.size() % ps.size()]);
    auto q = connected_query(rng, g, 1 + out.size() % 3);
    if (q.empty()) continue;
    out.push_back({std::move(g), std::move(q)});
  }
  return out;
}

Report decomposition_equivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  const double probs[] = {0.1, 0.3, 0.6};
  std::size_t mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    const Graph g = random_graph(rng, static_cast<NodeId>(uniform(rng, 5, 60)), probs[i % 3]);
    if (truss_decompose(g) != oracle::truss_decompose(g)) ++mismatches;
  }
  const double secs = seconds_since(start);
  return {mismatches == 0 && secs < 120 ? Outcome::kPass : Outcome::kFail,
          std::to_string(500 - mismatches) + "/500 graphs match, " + fmt(secs) + " s (limit 120)"};
}

Report max_k_correctness() {
  const auto start = Clock::now();
  const auto suite = make_suite(1002, 300, 3, 30, {0.15, 0.3, 0.5});
  std::size_t mismatches = 0;
  for (const auto& [g, q] : suite) {
    const auto idx = TrussIndex::build(g);
    if (find_g0(g, idx, q).k != oracle::max_k(g, q)) ++mismatches;
  }
  const double secs = seconds_since(start);
  return {mismatches == 0 && secs < 120 ? Outcome::kPass : Outcome::kFail,
          std::to_string(300 - mismatches) + "/300 instances match, " + fmt(secs) +
              " s (limit 120)"};
}

// Suite shared by the approximation and iteration criteria.
struct ApproxRun {
  Instance inst;
  oracle::Answer exact;
  std::uint32_t exact_min_qd;
  CommunityResult basic;
  CommunityResult bulk;
  CommunityResult local;
};

std::vector<ApproxRun> approx_runs;
double approx_secs = 0;

void run_approx_suite() {
  const auto start = Clock::now();
  for (auto& inst : make_suite(1003, 200, 4, 14, {0.3, 0.5, 0.7})) {
    const auto idx = TrussIndex::build(inst.g);
    ApproxRun r{std::move(inst), {}, 0, {}, {}, {}};
    r.exact = oracle::ctc(r.inst.g, r.inst.q);
    r.exact_min_qd = oracle::min_query_distance(r.inst.g, r.inst.q, r.exact.k_opt);
    r.basic = basic_search(r.inst.g, idx, spec_of(r.inst.q));
    r.bulk = bulk_delete_search(r.inst.g, idx, spec_of(r.inst.q));
    r.local = lctc_search(r.inst.g, idx, spec_of(r.inst.q));
    invariants.add(r.inst.g, r.basic, r.inst.q, "approximation suite, basic");
    invariants.add(r.inst.g, r.bulk, r.inst.q, "approximation suite, bulk");
    invariants.add(r.inst.g, r.local, r.inst.q, "approximation suite, local");
    approx_runs.push_back(std::move(r));
  }
  approx_secs = seconds_since(start);
}

Report two_approximation() {
  std::size_t diam_bad = 0, qd_bad = 0, k_bad = 0;
  for (const auto& r : approx_runs) {
    diam_bad += r.basic.diameter > 2 * r.exact.diam_opt;
    qd_bad += r.basic.query_distance != r.exact_min_qd;
    k_bad += r.basic.k != r.exact.k_opt;
  }
  const bool ok = diam_bad + qd_bad + k_bad == 0 && approx_secs < 600;
  return {ok ? Outcome::kPass : Outcome::kFail,
          std::to_string(approx_runs.size()) + " instances; diameter violations " +
              std::to_string(diam_bad) + ", query distance mismatches " + std::to_string(qd_bad) +
              ", k mismatches " + std::to_string(k_bad) + ", suite " + fmt(approx_secs) +
              " s (limit 600)"};
}

Report bulk_bound() {
  std::size_t bad = 0, k_bad = 0;
  for (const auto& r : approx_runs) {
    bad += r.bulk.diameter > 2 * r.exact.diam_opt + 2;
    k_bad += r.bulk.k != r.exact.k_opt;
  }
  return {bad + k_bad == 0 ? Outcome::kPass : Outcome::kFail,
          std::to_string(approx_runs.size()) + " instances; violations of diam <= 2 opt + 2: " +
              std::to_string(bad) + ", k mismatches " + std::to_string(k_bad)};
}

Report free_rider() {
  std::mt19937_64 rng(1006);
  std::size_t instances = 0, pairs = 0, violations = 0;
  while (instances < 100) {
    const auto n = static_cast<NodeId>(uniform(rng, 5, 12));
    const Graph g = random_graph(rng, n, 0.45 + 0.1 * static_cast<double>(instances % 4));
    const auto q = connected_query(rng, g, 1 + instances % 3);
    if (q.empty()) continue;
    ++instances;
    const auto exact = oracle::ctc(g, q);
    const auto& h = exact.maximal_optimal;
    for (const auto& star : oracle::query_independent_optima(g)) {
      ++pairs;
      std::vector<EdgeId> both;
      std::set_union(h.edges.begin(), h.edges.end(), star.edges.begin(), star.edges.end(),
                     std::back_inserter(both));
      if (both == h.edges) continue;
      std::vector<NodeId> shared;
      std::set_intersection(h.nodes.begin(), h.nodes.end(), star.nodes.begin(), star.nodes.end(),
                            std::back_inserter(shared));
      if (shared.empty()) continue;  // disconnected union
      const auto c = check_community(g, both, q, exact.k_opt);
      if (c.diameter <= h.diameter) ++violations;
    }
  }
  return {violations == 0 ? Outcome::kPass : Outcome::kFail,
          std::to_string(instances) + " instances, " + std::to_string(pairs) +
              " optimum pairs, violations " + std::to_string(violations)};
}

Report planted_recovery() {
  const Graph g = planted_k8(1007);
  const auto idx = TrussIndex::build(g);
  std::mt19937_64 rng(10071);
  double f1_sum = 0;
  std::size_t k_bad = 0;
  for (int i = 0; i < 50; ++i) {
    const auto clique = static_cast<NodeId>(uniform(rng, 0, 2));
    const auto a = static_cast<NodeId>(uniform(rng, 0, 7));
    auto b = static_cast<NodeId>(uniform(rng, 0, 6));
    if (b >= a) ++b;
    std::vector<NodeId> q{8 * clique + std::min(a, b), 8 * clique + std::max(a, b)};
    const auto r = lctc_search(g, idx, spec_of(q));
    invariants.add(g, r, q, "planted cliques");
    std::vector<NodeId> truth;
    for (NodeId v = 8 * clique; v < 8 * clique + 8; ++v) truth.push_back(v);
    f1_sum += f1_score<NodeId>(r.nodes, truth).f1;
    k_bad += r.k != 8;
  }
  const double mean = f1_sum / 50;
  return {mean == 1.0 && k_bad == 0 ? Outcome::kPass : Outcome::kFail,
          "50 queries, mean F1 " + std::to_string(mean) + " (required 1.0 exactly), k != 8 in " +
              std::to_string(k_bad)};
}

Report iteration_bound() {
  std::size_t bad = 0;
  for (const auto& r : approx_runs) {
    const std::size_t bound = (r.bulk.g0_nodes + r.bulk.k - 1) / r.bulk.k + 1;
    bad += r.bulk.iterations > bound;
  }
  return {bad == 0 ? Outcome::kPass : Outcome::kFail,
          std::to_string(approx_runs.size()) + " bulk runs, iterations above ceil(|V(G0)|/k) + 1: " +
              std::to_string(bad)};
}

Report structural_invariants() {
  std::string detail = std::to_string(invariants.checked) + " communities checked, violations " +
                       std::to_string(invariants.failures.size());
  if (!invariants.failures.empty()) detail += "; first: " + invariants.failures.front();
  return {invariants.failures.empty() && invariants.checked > 0 ? Outcome::kPass : Outcome::kFail,
          detail};
}

std::string saved_index(const Graph& g, const TrussIndex& idx) {
  std::ostringstream os(std::ios::binary);
  save_index(g, idx, os);
  return os.str();
}

bool same_result(const CommunityResult& a, const CommunityResult& b) {
  return a.k == b.k && a.nodes == b.nodes && a.edges == b.edges && a.diameter == b.diameter &&
         a.query_distance == b.query_distance && a.iterations == b.iterations;
}

Report index_persistence() {
  std::vector<std::pair<std::string, Graph>> fixtures{
      {"tri", g_tri()},         {"bowtie", g_bowtie()},     {"k4", g_k4()},
      {"2k4", g_2k4()},         {"k4path", g_k4path()},     {"shortcut", g_shortcut()},
      {"c5", g_c5()},           {"planted", planted_k8(9)}};
  std::mt19937_64 rng(1009);
  for (int i = 0; i < 20; ++i)
    fixtures.emplace_back("random" + std::to_string(i),
                          random_graph(rng, static_cast<NodeId>(uniform(rng, 5, 60)), 0.25));
  std::size_t failures = 0;
  std::string first;
  for (const auto& [name, g] : fixtures) {
    const auto built = TrussIndex::build(g);
    const std::string bytes = saved_index(g, built);
    std::istringstream in(bytes, std::ios::binary);
    const auto loaded = load_index(in, g);
    bool ok = saved_index(g, loaded) == bytes;
    for (NodeId v = 0; ok && v < g.node_count(); ++v) {
      if (g.degree(v) == 0) continue;
      const std::vector<NodeId> q{v};
      ok = same_result(basic_search(g, built, spec_of(q)), basic_search(g, loaded, spec_of(q))) &&
           same_result(bulk_delete_search(g, built, spec_of(q)),
                       bulk_delete_search(g, loaded, spec_of(q))) &&
           same_result(lctc_search(g, built, spec_of(q)), lctc_search(g, loaded, spec_of(q)));
    }
    if (!ok) {
      ++failures;
      if (first.empty()) first = name;
    }
  }
  return {failures == 0 ? Outcome::kPass : Outcome::kFail,
          std::to_string(fixtures.size() - failures) + "/" + std::to_string(fixtures.size()) +
              " fixtures round-trip byte-identically with identical query results" +
              (first.empty() ? "" : "; first failure " + first)};
}

Report dataset_check() {
  const char* env = std::getenv("CTC_DBLP");
  const std::string path = env ? env : "data/com-dblp.ungraph.txt";
  if (!fs::exists(path)) return {Outcome::kSkip, "dataset not found at " + path + " (set CTC_DBLP)"};
  const Graph g = load_edge_list_file(path);
  const auto start = Clock::now();
  const auto idx = TrussIndex::build(g);
  const double secs = seconds_since(start);
  const std::string bytes = saved_index(g, idx);
  const double ratio = static_cast<double>(bytes.size()) / static_cast<double>(fs::file_size(path));
  const bool ok = secs < 120 && ratio >= 1.2 && ratio <= 2.5 && idx.max_trussness() == 114;
  return {ok ? Outcome::kPass : Outcome::kFail,
          "n=" + std::to_string(g.node_count()) + " m=" + std::to_string(g.edge_count()) +
              ", build " + fmt(secs) + " s (limit 120), index/graph bytes " + fmt(ratio) +
              " (range [1.2, 2.5]), max trussness " + std::to_string(idx.max_trussness()) +
              " (expected 114)"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Report determinism() {
  const fs::path dir = fs::temp_directory_path() / ("ctc_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  {
    std::ofstream(dir / "graph.txt") << edge_list_text(planted_k8(1011, 40));
  }
  const std::string tool = CTC_TOOL_PATH;
  auto sh = [&](const std::string& args) {
    return std::system(("\"" + tool + "\" " + args + " 2>/dev/null").c_str());
  };
  const std::string graph = (dir / "graph.txt").string();
  std::size_t compared = 0, differing = 0, failed = 0;
  for (int pass = 0; pass < 2; ++pass) {
    const std::string tag = std::to_string(pass);
    const std::string idx = (dir / ("index" + tag)).string();
    const std::string work = (dir / ("work" + tag)).string();
    failed += sh("index --graph " + graph + " --out " + idx + " > /dev/null") != 0;
    failed += sh("gen-queries --graph " + graph + " --size 3 --inter-distance 2 --count 30 --seed 77"
                 " --out " + work) != 0;
    for (const char* algo : {"basic", "bd", "lctc"})
      failed += sh(std::string("query --no-timing --seed 77 --graph ") + graph + " --index " + idx +
                   " --queries " + work + " --algo " + algo + " --out " +
                   (dir / (std::string(algo) + tag)).string()) != 0;
  }
  for (const std::string name : {"index", "work", "basic", "bd", "lctc"}) {
    ++compared;
    const auto a = slurp(dir / (name + "0")), b = slurp(dir / (name + "1"));
    if (a.empty() || a != b) ++differing;
  }
  fs::remove_all(dir);
  return {failed == 0 && differing == 0 ? Outcome::kPass : Outcome::kFail,
          std::to_string(compared) + " CLI outputs compared across two runs, differing " +
              std::to_string(differing) + ", failed commands " + std::to_string(failed)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Report()> run;
  };
  run_approx_suite();
  const std::vector<Criterion> criteria{
      {1, "decomposition matches the fixpoint oracle", decomposition_equivalence},
      {2, "largest k matches the oracle", max_k_correctness},
      {3, "single-removal search within 2x optimal diameter, minimal query distance",
       two_approximation},
      {4, "bulk-removal search within 2x optimal diameter + 2", bulk_bound},
      {6, "maximal optimal community admits no free riders", free_rider},
      {7, "local search recovers planted cliques", planted_recovery},
      {8, "bulk-removal iteration bound", iteration_bound},
      {9, "index persistence", index_persistence},
      {10, "DBLP index size, time and max trussness", dataset_check},
      {11, "CLI pipeline is deterministic", determinism},
      // Last, so it covers the communities produced above.
      {5, "structural invariants of every emitted community", structural_invariants},
  };
  struct Line {
    int id;
    const char* name;
    Report report;
  };
  std::vector<Line> reports;
  for (const auto& c : criteria) {
    Report r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {Outcome::kFail, std::string("exception: ") + e.what()};
    }
    reports.push_back({c.id, c.name, r});
  }
  std::sort(reports.begin(), reports.end(), [](const Line& a, const Line& b) { return a.id < b.id; });
  for (const auto& [id, name, r] : reports) {
    const char* tag = r.outcome == Outcome::kPass ? "PASS" : r.outcome == Outcome::kFail ? "FAIL" : "SKIP";
    std::cout << "[" << tag << "] criterion " << id << ": " << name << " -- " << r.detail << '\n';
  }
  const bool failed = std::any_of(reports.begin(), reports.end(),
                                  [](const Line& l) { return l.report.outcome == Outcome::kFail; });
  return failed ? 1 : 0;
}
