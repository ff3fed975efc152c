#include "ctc/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "ctc/eval.hpp"
#include "ctc/local_search.hpp"
#include "ctc/oracle.hpp"
#include "ctc/search.hpp"

namespace ctc {

namespace {

using Json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QueryOptions {
  std::string graph;
  std::string index;
  std::string algo = "bd";
  std::string query;
  std::string queries;
  std::size_t eta = static_cast<std::size_t>(kDefaultEta);
  double gamma = kDefaultGamma;
  std::uint64_t seed = 0;
  double budget_secs = kDefaultBudgetSecs;
  std::string out;
  bool no_timing = false;
};

// Writes to --out when given, else to the stream passed in.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty()) return;
    file_.open(path, std::ios::binary);
    if (!file_) throw ConfigError("cannot write " + path);
    stream_ = &file_;
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::vector<ExternalId> parse_ids(const std::string& text) {
  std::vector<ExternalId> ids;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    ExternalId x = 0;
    auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), x);
    if (ec != std::errc{} || p != token.data() + token.size())
      throw ConfigError("bad node id '" + token + "'");
    ids.push_back(x);
  }
  return ids;
}

std::size_t worker_count(std::size_t jobs) {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CTC_THREADS")) {
    std::size_t cap = 0;
    const std::string s(env);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (ec != std::errc{} || p != s.data() + s.size() || cap == 0)
      throw ConfigError("CTC_THREADS must be a positive integer");
    n = std::min(n, cap);
  }
  return std::max<std::size_t>(1, std::min(n, jobs));
}

Json ids_json(const Graph& g, std::span<const NodeId> nodes) {
  Json a = Json::array();
  for (auto v : nodes) a.push_back(g.external_id(v));
  return a;
}

Json run_one(const Graph& g, const TrussIndex& idx, Algorithm algo, const QueryOptions& opt,
             const std::vector<ExternalId>& ext) {
  Json row;
  row["query"] = ext;
  row["algo"] = algorithm_name(algo);
  try {
    QuerySpec spec;
    for (auto x : ext) {
      const NodeId v = g.internal_id(x);
      if (v == kNoNode) throw NoCommunity("unknown node id " + std::to_string(x));
      spec.query_nodes.push_back(v);
    }
    spec.eta = opt.eta;
    spec.gamma = opt.gamma;
    spec.rng_seed = opt.seed;
    spec.time_budget = std::chrono::duration<double>(opt.budget_secs);

    CommunityResult r;
    switch (algo) {
      case Algorithm::kBasic: r = basic_search(g, idx, spec); break;
      case Algorithm::kBulkDelete: r = bulk_delete_search(g, idx, spec); break;
      case Algorithm::kLocal: r = lctc_search(g, idx, spec); break;
      case Algorithm::kOracle: {
        const auto start = std::chrono::steady_clock::now();
        const auto query = normalize_query(g, spec.query_nodes);
        const auto ans = oracle::ctc(g, query);
        r.algorithm = Algorithm::kOracle;
        r.k = ans.k_opt;
        r.nodes = ans.witness.nodes;
        r.edges = ans.witness.edges;
        r.diameter = ans.witness.diameter;
        r.query_distance = ans.witness.query_distance;
        r.g0_nodes = find_g0(g, idx, query).g0.live_nodes().size();
        r.elapsed = std::chrono::steady_clock::now() - start;
        break;
      }
    }
    row["k"] = r.k;
    row["nodes"] = ids_json(g, r.nodes);
    row["edge_count"] = r.edges.size();
    row["diameter"] = r.diameter;
    row["query_distance"] = r.query_distance;
    row["density"] = edge_density(r.nodes.size(), r.edges.size());
    row["iterations"] = r.iterations;
    row["g0_nodes"] = r.g0_nodes;
    row["elapsed_ms"] =
        opt.no_timing ? 0
                      : std::chrono::duration_cast<std::chrono::milliseconds>(r.elapsed).count();
    row["status"] = r.partial ? "partial" : "ok";
  } catch (const NoCommunity& e) {
    row["status"] = "no_community";
    row["reason"] = e.what();
  }
  return row;
}

std::vector<std::vector<ExternalId>> collect_queries(const QueryOptions& opt) {
  if (opt.query.empty() == opt.queries.empty())
    throw ConfigError("give exactly one of --query or --queries");
  if (!opt.query.empty()) return {parse_ids(opt.query)};
  std::ifstream in(opt.queries);
  if (!in) throw ConfigError("cannot open " + opt.queries);
  return read_workload(in).queries;
}

int cmd_query(const QueryOptions& opt, std::ostream& out) {
  const auto algo = parse_algorithm(opt.algo);
  if (!algo) throw ConfigError("unknown algorithm '" + opt.algo + "'");
  const auto queries = collect_queries(opt);
  const Graph g = load_edge_list_file(opt.graph);
  if (*algo == Algorithm::kOracle && g.node_count() > oracle::kMaxEnumerationNodes)
    throw ConfigError("oracle refuses graphs above " +
                      std::to_string(oracle::kMaxEnumerationNodes) + " nodes");
  TrussIndex idx;
  if (opt.index.empty()) {
    idx = TrussIndex::build(g);
  } else {
    std::ifstream in(opt.index, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + opt.index);
    idx = load_index(in, g);
  }

  std::vector<Json> rows(queries.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < queries.size();)
      rows[i] = run_one(g, idx, *algo, opt, queries[i]);
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t n = worker_count(queries.size());
    for (std::size_t t = 1; t < n; ++t) pool.emplace_back(work);
    work();
  }
  Sink sink(opt.out, out);
  for (const auto& row : rows) *sink << row.dump() << '\n';
  return kExitOk;
}

int cmd_index(const std::string& graph_path, const std::string& out_path, std::ostream& out) {
  const Graph g = load_edge_list_file(graph_path);
  const auto start = std::chrono::steady_clock::now();
  const TrussIndex idx = TrussIndex::build(g);
  const std::chrono::duration<double> secs = std::chrono::steady_clock::now() - start;
  {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw ConfigError("cannot write " + out_path);
    save_index(g, idx, file);
    if (!file) throw Error("write failed: " + out_path);
  }
  Json stats;
  stats["nodes"] = g.node_count();
  stats["edges"] = g.edge_count();
  stats["max_trussness"] = idx.max_trussness();
  stats["build_secs"] = secs.count();
  stats["index_bytes"] = std::filesystem::file_size(out_path);
  out << stats.dump() << '\n';
  return kExitOk;
}

struct EvalTotals {
  std::size_t rows = 0, scored = 0, unmatched = 0, no_community = 0, timeouts = 0, answered = 0;
  double precision = 0, recall = 0, f1 = 0, diameter = 0, density = 0, size_ratio = 0;
};

int cmd_eval(const std::string& results_path, const std::string& truth_path,
             const std::string& out_path, std::ostream& out) {
  const GroundTruth truth = load_ground_truth_file(truth_path);
  std::ifstream in(results_path);
  if (!in) throw ConfigError("cannot open " + results_path);
  EvalTotals t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const Json row = Json::parse(line);
    ++t.rows;
    const auto status = row.at("status").get<std::string>();
    if (status == "no_community") {
      ++t.no_community;
      continue;
    }
    if (status == "partial") ++t.timeouts;
    const auto query = row.at("query").get<std::vector<ExternalId>>();
    const auto nodes = row.at("nodes").get<std::vector<ExternalId>>();
    ++t.answered;
    t.diameter += row.at("diameter").get<double>();
    t.density += row.at("density").get<double>();
    t.size_ratio += size_ratio(nodes.size(), row.at("g0_nodes").get<std::size_t>());
    const auto s = truth.best_match(query, nodes);
    if (!s) {
      ++t.unmatched;
      continue;
    }
    ++t.scored;
    t.precision += s->precision;
    t.recall += s->recall;
    t.f1 += s->f1;
  }
  if (t.rows == 0) throw Error("results file is empty: " + results_path);

  auto mean = [](double sum, std::size_t n) { return n ? Json(sum / static_cast<double>(n)) : Json(); };
  Json summary;
  summary["queries"] = t.rows;
  summary["answered"] = t.answered;
  summary["scored"] = t.scored;
  summary["unmatched"] = t.unmatched;
  summary["no_community"] = t.no_community;
  summary["timeouts"] = t.timeouts;
  summary["precision"] = mean(t.precision, t.scored);
  summary["recall"] = mean(t.recall, t.scored);
  summary["f1"] = mean(t.f1, t.scored);
  summary["diameter"] = mean(t.diameter, t.answered);
  summary["density"] = mean(t.density, t.answered);
  summary["size_ratio"] = mean(t.size_ratio, t.answered);
  Sink sink(out_path, out);
  *sink << summary.dump() << '\n';
  return kExitOk;
}

int cmd_gen_queries(const std::string& graph_path, const WorkloadParams& p,
                    const std::string& truth_path, const std::string& out_path, std::ostream& out) {
  try {
    validate(p);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (p.unique_truth && truth_path.empty()) throw ConfigError("--unique needs --truth");
  const Graph g = load_edge_list_file(graph_path);
  std::optional<GroundTruth> truth;
  if (!truth_path.empty()) truth = load_ground_truth_file(truth_path);
  const auto queries = gen_queries(g, p, truth ? &*truth : nullptr);
  Sink sink(out_path, out);
  write_workload(*sink, g, p, queries);
  return kExitOk;
}

// Exact answer as JSON, for building test fixtures.
int cmd_oracle(const std::string& graph_path, const std::string& query, std::ostream& out) {
  const Graph g = load_edge_list_file(graph_path);
  std::vector<NodeId> q;
  for (auto x : parse_ids(query)) {
    const NodeId v = g.internal_id(x);
    if (v == kNoNode) throw ConfigError("unknown node id " + std::to_string(x));
    q.push_back(v);
  }
  const auto ans = oracle::ctc(g, normalize_query(g, q));
  Json row;
  row["query"] = parse_ids(query);
  row["k"] = ans.k_opt;
  row["diameter"] = ans.diam_opt;
  row["min_query_distance"] = ans.min_query_distance;
  row["witness"] = ids_json(g, ans.witness.nodes);
  row["maximal_optimal"] = ids_json(g, ans.maximal_optimal.nodes);
  out << row.dump() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Closest truss community search"};
  app.require_subcommand(1);

  std::string graph, index_out;
  auto* index = app.add_subcommand("index", "Build and save the truss index of a graph");
  index->add_option("--graph", graph, "Edge list")->required()->check(CLI::ExistingFile);
  index->add_option("--out", index_out, "Index file to write")->required();

  QueryOptions qo;
  auto* query = app.add_subcommand("query", "Search communities for one or more queries");
  query->add_option("--graph", qo.graph, "Edge list")->required()->check(CLI::ExistingFile);
  query->add_option("--index", qo.index, "Saved truss index (built in memory if absent)")
      ->check(CLI::ExistingFile);
  query->add_option("--algo", qo.algo, "basic, bd, lctc or oracle")->capture_default_str();
  query->add_option("--query", qo.query, "Query node ids, e.g. \"1 2 3\"");
  query->add_option("--queries", qo.queries, "Workload file, one query per line")
      ->check(CLI::ExistingFile);
  query->add_option("--eta", qo.eta, "Local expansion size")->capture_default_str();
  query->add_option("--gamma", qo.gamma, "Truss distance penalty")->capture_default_str();
  query->add_option("--seed", qo.seed, "Random seed")->capture_default_str();
  query->add_option("--budget-secs", qo.budget_secs, "Time budget per query")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  query->add_option("--out", qo.out, "Result file (default stdout)");
  query->add_flag("--no-timing", qo.no_timing, "Report elapsed_ms as 0");

  std::string results, truth, eval_out;
  auto* eval = app.add_subcommand("eval", "Score a result stream against ground truth");
  eval->add_option("--results", results, "Result stream from query")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--truth", truth, "Ground-truth communities")->required()->check(CLI::ExistingFile);
  eval->add_option("--out", eval_out, "Summary file (default stdout)");

  WorkloadParams wp;
  std::string gen_graph, gen_truth, gen_out;
  auto* gen = app.add_subcommand("gen-queries", "Generate a seeded query workload");
  gen->add_option("--graph", gen_graph, "Edge list")->required()->check(CLI::ExistingFile);
  gen->add_option("--size", wp.size, "Nodes per query")->capture_default_str();
  gen->add_option("--fraction", wp.fraction, "Degree rank: top fraction of nodes")
      ->capture_default_str();
  gen->add_option("--inter-distance", wp.inter_distance, "Max pairwise distance")
      ->capture_default_str();
  gen->add_option("--count", wp.count, "Number of queries")->capture_default_str();
  gen->add_option("--seed", wp.seed, "Random seed")->capture_default_str();
  gen->add_option("--truth", gen_truth, "Ground-truth communities")->check(CLI::ExistingFile);
  gen->add_flag("--unique", wp.unique_truth, "Keep queries inside exactly one community");
  gen->add_option("--out", gen_out, "Workload file (default stdout)");

  std::string oracle_graph, oracle_query;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact answer on a small graph");
  oracle_cmd->group("");
  oracle_cmd->add_option("--graph", oracle_graph)->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("--query", oracle_query)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*index) return cmd_index(graph, index_out, out);
    if (*query) return cmd_query(qo, out);
    if (*eval) return cmd_eval(results, truth, eval_out, out);
    if (*gen) return cmd_gen_queries(gen_graph, wp, gen_truth, gen_out, out);
    if (*oracle_cmd) return cmd_oracle(oracle_graph, oracle_query, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const OracleSizeExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed result line: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitConfig;
}

}  // namespace ctc
