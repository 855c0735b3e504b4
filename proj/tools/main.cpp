#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nnro/bench.hpp"
#include "nnro/dataset.hpp"
#include "nnro/hnsw.hpp"
#include "nnro/io.hpp"
#include "nnro/reorder.hpp"
#include "nnro/search.hpp"

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void emit(const json& j) { std::cout << j.dump() << "\n"; }

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw nnro::IoError("cannot open " + path + " for writing");
  return out;
}

nnro::InitMode parse_init(const std::string& s) {
  if (s == "hierarchical") return nnro::InitMode::kHierarchical;
  if (s == "sample") return nnro::InitMode::kRandomSample;
  throw CLI::ValidationError("--init", "expected 'hierarchical' or 'sample'");
}

struct SynthArgs {
  uint32_t n = 10000, dim = 16, clusters = 50;
  double spread = 0.05;
  uint64_t seed = 0;
  std::string out, labels_out;
};

void run_synth(const SynthArgs& a) {
  const nnro::LabeledDataset ds = nnro::synth_clusters(a.n, a.dim, a.clusters, a.spread, a.seed);
  nnro::write_fvecs_file(a.out, ds.data);
  if (!a.labels_out.empty()) {
    std::vector<std::vector<uint32_t>> rows(ds.labels.size());
    for (size_t i = 0; i < ds.labels.size(); ++i) rows[i] = {ds.labels[i]};
    nnro::write_ivecs_file(a.labels_out, rows);
  }
  emit({{"command", "synth"}, {"n", a.n}, {"dim", a.dim}, {"clusters", a.clusters},
        {"spread", a.spread}, {"seed", a.seed}, {"out", a.out}});
}

struct BuildArgs {
  std::string data, out;
  nnro::BuildParams params;
};

void run_build(const BuildArgs& a) {
  const nnro::VectorDataset data = nnro::read_vectors_file(a.data);
  const auto t0 = Clock::now();
  const nnro::BuildGraph g = nnro::build_index(data, a.params);
  const nnro::FlatIndex index = nnro::flatten(g, data);
  const double build_s = seconds_since(t0);
  nnro::save_index_file(a.out, index);
  emit({{"command", "build"}, {"nodes", index.size()}, {"dim", index.dim()},
        {"max_links", index.max_links()}, {"layers", index.upper_layers().size()},
        {"build_s", build_s}, {"out", a.out}});
}

struct ReorderArgs {
  std::string index_in, out, algorithm = "gorder", ordering_out;
  uint32_t window = 5, groups = 8;
  bool score = false;
};

void run_reorder(const ReorderArgs& a) {
  auto spec = nnro::parse_reorder_spec(a.algorithm);
  if (!spec) throw CLI::ValidationError("--algorithm", "unknown algorithm '" + a.algorithm + "'");
  spec->window = a.window;
  spec->groups = a.groups;
  const nnro::FlatIndex index = nnro::load_index_file(a.index_in);
  const nnro::BuildGraph base = nnro::base_layer_graph(index);
  const auto t0 = Clock::now();
  const nnro::Ordering p = nnro::make_ordering(base, *spec);
  const double reorder_s = seconds_since(t0);
  const nnro::FlatIndex moved = nnro::apply_ordering(index, p);
  nnro::save_index_file(a.out, moved);
  if (!a.ordering_out.empty()) nnro::save_ordering_file(a.ordering_out, p);
  json j = {{"command", "reorder"}, {"algorithm", a.algorithm}, {"nodes", moved.size()},
            {"reorder_s", reorder_s}, {"out", a.out}};
  if (a.score) {
    const nnro::BuildGraph sym = nnro::symmetrize(base);
    const nnro::OrderingScore s = nnro::score_ordering(sym, p, a.window);
    const nnro::OrderingScore s0 = nnro::score_ordering(sym, nnro::Ordering::identity(index.size()), a.window);
    j["score"] = {{"gorder", s.gorder}, {"bandwidth", s.bandwidth}, {"linear", s.linear},
                  {"log2", s.log2}};
    j["score_before"] = {{"gorder", s0.gorder}, {"bandwidth", s0.bandwidth},
                         {"linear", s0.linear}, {"log2", s0.log2}};
  }
  emit(j);
}

struct TruthArgs {
  std::string data, queries, out;
  uint32_t k = 100;
  unsigned threads = 0;
};

void run_groundtruth(const TruthArgs& a) {
  const nnro::VectorDataset data = nnro::read_vectors_file(a.data);
  const nnro::VectorDataset queries = nnro::read_vectors_file(a.queries);
  const auto truth = nnro::brute_force_all(data, queries, a.k, a.threads);
  nnro::write_ivecs_file(a.out, truth);
  emit({{"command", "groundtruth"}, {"queries", queries.size()}, {"k", a.k}, {"out", a.out}});
}

struct QueryArgs {
  std::string index, queries, truth, out, init = "hierarchical";
  uint32_t beam = 100, k = 10, sample_size = 50;
  uint64_t seed = 0;
};

void run_query(const QueryArgs& a) {
  const nnro::FlatIndex index = nnro::load_index_file(a.index);
  const nnro::VectorDataset queries = nnro::read_vectors_file(a.queries);
  if (queries.empty()) throw nnro::IoError("query file holds no vectors");
  nnro::QueryParams params;
  params.beam_width = a.beam;
  params.k = a.k;
  params.init = parse_init(a.init);
  params.sample_size = a.sample_size;
  params.sample_seed = a.seed;
  std::vector<std::vector<uint32_t>> results(queries.size());
  uint64_t visited = 0, comps = 0;
  bool truncated = false;
  for (uint32_t q = 0; q < queries.size(); ++q) {
    const nnro::SearchResult res = nnro::knn_query(index, queries.vec(q), params);
    results[q].reserve(res.hits.size());
    for (const nnro::Neighbor& h : res.hits) results[q].push_back(h.id);
    visited += res.visited;
    comps += res.dist_comps;
    truncated |= res.truncated;
  }
  if (!a.out.empty()) nnro::write_ivecs_file(a.out, results);
  json j = {{"command", "query"}, {"queries", queries.size()}, {"k", a.k}, {"beam", a.beam},
            {"mean_visited", double(visited) / queries.size()},
            {"mean_dist_comps", double(comps) / queries.size()}, {"truncated", truncated}};
  if (!a.truth.empty()) {
    const auto truth = nnro::read_ivecs_file(a.truth);
    if (truth.size() < results.size())
      throw nnro::IoError("ground truth has fewer rows than the query file");
    double recall = 0.0;
    for (uint32_t q = 0; q < queries.size(); ++q)
      recall += nnro::recall_at(results[q], truth[q], a.k).value;
    j["recall"] = recall / queries.size();
  }
  emit(j);
}

struct BenchArgs {
  std::string index, queries, truth, csv, json_out;
  std::vector<std::string> orderings = {"original", "gorder",     "rcm", "degree-sort",
                                        "hub-sort", "hub-cluster", "dbg"};
  nnro::BenchConfig config;
  uint32_t window = 5, groups = 8;
  double build_seconds = 0.0;
};

void run_bench(const BenchArgs& a) {
  const nnro::FlatIndex index = nnro::load_index_file(a.index);
  const nnro::VectorDataset queries = nnro::read_vectors_file(a.queries);
  const auto truth = nnro::read_ivecs_file(a.truth);
  const nnro::BuildGraph base = nnro::base_layer_graph(index);
  std::vector<nnro::NamedOrdering> orderings;
  orderings.reserve(a.orderings.size());
  for (const std::string& token : a.orderings) {
    if (token == "original" || token == "identity") {
      orderings.push_back({token, nnro::Ordering::identity(index.size()), 0.0});
      continue;
    }
    auto spec = nnro::parse_reorder_spec(token);
    if (!spec) throw CLI::ValidationError("--orderings", "unknown ordering '" + token + "'");
    spec->window = a.window;
    spec->groups = a.groups;
    const auto t0 = Clock::now();
    nnro::Ordering p = nnro::make_ordering(base, *spec);
    orderings.push_back({token, std::move(p), seconds_since(t0)});
  }
  nnro::BenchConfig config = a.config;
  config.build_seconds = a.build_seconds;
  const nnro::BenchReport report = nnro::run_benchmark(index, orderings, queries, truth, config);
  if (!a.csv.empty()) {
    auto out = open_out(a.csv);
    nnro::write_report_csv(out, report);
  }
  if (!a.json_out.empty()) {
    auto out = open_out(a.json_out);
    nnro::write_report_json(out, report);
  }
  nnro::write_report_csv(std::cout, report);
}

struct StatsArgs {
  std::string index, direction = "out", out;
};

void run_stats(const StatsArgs& a) {
  if (a.direction != "out" && a.direction != "in")
    throw CLI::ValidationError("--direction", "expected 'out' or 'in'");
  const nnro::FlatIndex index = nnro::load_index_file(a.index);
  const nnro::BuildGraph base = nnro::base_layer_graph(index);
  const nnro::DegreeStats stats = nnro::degree_stats(
      base, a.direction == "out" ? nnro::DegreeDirection::kOut : nnro::DegreeDirection::kIn);
  auto write_csv = [&](std::ostream& os) {
    os << "degree,count\n";
    for (size_t d = 0; d < stats.histogram.size(); ++d)
      os << d << ',' << stats.histogram[d] << '\n';
  };
  if (a.out.empty()) {
    write_csv(std::cout);
    return;
  }
  auto out = open_out(a.out);
  write_csv(out);
  emit({{"command", "stats"}, {"nodes", index.size()}, {"direction", a.direction},
        {"mean_degree", stats.mean}, {"stddev_degree", stats.stddev},
        {"min_degree", stats.min}, {"max_degree", stats.max}, {"out", a.out}});
}

struct TraceArgs {
  std::string index, queries, out, init = "hierarchical";
  uint32_t beam = 100, k = 10, sample_size = 50;
  uint64_t seed = 0;
};

void run_trace(const TraceArgs& a) {
  const nnro::FlatIndex index = nnro::load_index_file(a.index);
  const nnro::VectorDataset queries = nnro::read_vectors_file(a.queries);
  nnro::QueryParams params;
  params.beam_width = a.beam;
  params.k = a.k;
  params.init = parse_init(a.init);
  params.sample_size = a.sample_size;
  params.sample_seed = a.seed;
  const auto trace = nnro::export_access_trace(index, queries, params);
  auto out = open_out(a.out);
  nnro::write_trace_csv(out, trace);
  emit({{"command", "trace"}, {"queries", queries.size()}, {"entries", trace.size()},
        {"out", a.out}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Near-neighbor search over a cache-conscious flat graph index"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* cmd_synth = app.add_subcommand("synth", "Generate a clustered synthetic dataset");
  cmd_synth->add_option("--n", synth.n, "Point count")->required();
  cmd_synth->add_option("--dim", synth.dim, "Dimensions")->required();
  cmd_synth->add_option("--clusters", synth.clusters, "Cluster count");
  cmd_synth->add_option("--spread", synth.spread, "Per-axis deviation inside a cluster");
  cmd_synth->add_option("--seed", synth.seed, "RNG seed");
  cmd_synth->add_option("--out", synth.out, "Output .fvecs path")->required();
  cmd_synth->add_option("--labels-out", synth.labels_out, "Optional cluster labels .ivecs path");
  cmd_synth->callback([&] { run_synth(synth); });

  BuildArgs build;
  auto* cmd_build = app.add_subcommand("build", "Build an index from a vector file");
  cmd_build->add_option("--data", build.data, "Input .fvecs/.bvecs path")->required();
  cmd_build->add_option("--out", build.out, "Output index path")->required();
  cmd_build->add_option("--max-links", build.params.max_links, "Per-node out-degree cap");
  cmd_build->add_option("--beam", build.params.build_beam_width, "Construction beam width");
  cmd_build->add_option("--level-scale", build.params.level_scale,
                        "Layer assignment scale (0 = 1/ln(max-links))");
  cmd_build->add_option("--seed", build.params.seed, "RNG seed for layer draws");
  cmd_build->callback([&] { run_build(build); });

  ReorderArgs reorder;
  auto* cmd_reorder = app.add_subcommand("reorder", "Relocate index blocks with a node ordering");
  cmd_reorder->add_option("--index", reorder.index_in, "Input index path")->required();
  cmd_reorder->add_option("--out", reorder.out, "Output index path")->required();
  cmd_reorder->add_option("--algorithm", reorder.algorithm,
                          "gorder|rcm|degree-sort[-in|-out]|hub-sort|hub-cluster|dbg");
  cmd_reorder->add_option("--window", reorder.window, "gorder window");
  cmd_reorder->add_option("--groups", reorder.groups, "dbg group count");
  cmd_reorder->add_option("--save-ordering", reorder.ordering_out, "Also save the ordering file");
  cmd_reorder->add_flag("--score", reorder.score, "Report layout quality objectives");
  cmd_reorder->callback([&] { run_reorder(reorder); });

  TruthArgs truth;
  auto* cmd_truth = app.add_subcommand("groundtruth", "Exact nearest neighbors for a query set");
  cmd_truth->add_option("--data", truth.data, "Dataset .fvecs/.bvecs path")->required();
  cmd_truth->add_option("--queries", truth.queries, "Query .fvecs/.bvecs path")->required();
  cmd_truth->add_option("--k", truth.k, "Neighbors per query");
  cmd_truth->add_option("--out", truth.out, "Output .ivecs path")->required();
  cmd_truth->add_option("--threads", truth.threads, "Worker threads (0 = hardware)");
  cmd_truth->callback([&] { run_groundtruth(truth); });

  QueryArgs query;
  auto* cmd_query = app.add_subcommand("query", "Run approximate queries against an index");
  cmd_query->add_option("--index", query.index, "Index path")->required();
  cmd_query->add_option("--queries", query.queries, "Query .fvecs/.bvecs path")->required();
  cmd_query->add_option("--beam", query.beam, "Query beam width");
  cmd_query->add_option("--k", query.k, "Neighbors per query");
  cmd_query->add_option("--init", query.init, "Seed selection: hierarchical|sample");
  cmd_query->add_option("--sample-size", query.sample_size, "Sample size for --init sample");
  cmd_query->add_option("--seed", query.seed, "Sample RNG seed");
  cmd_query->add_option("--truth", query.truth, "Optional ground-truth .ivecs for recall");
  cmd_query->add_option("--out", query.out, "Optional result .ivecs path");
  cmd_query->callback([&] { run_query(query); });

  BenchArgs bench;
  auto* cmd_bench = app.add_subcommand("bench", "Timed sweep across orderings and beam widths");
  cmd_bench->add_option("--index", bench.index, "Index path")->required();
  cmd_bench->add_option("--queries", bench.queries, "Query .fvecs/.bvecs path")->required();
  cmd_bench->add_option("--truth", bench.truth, "Ground-truth .ivecs path")->required();
  cmd_bench->add_option("--orderings", bench.orderings, "Ordering tokens ('original' = baseline)")
      ->delimiter(',');
  cmd_bench->add_option("--queries-count", bench.config.query_count, "Queries used per pass");
  cmd_bench->add_option("--reps", bench.config.repetitions, "Timed repetitions");
  cmd_bench->add_option("--beams", bench.config.beam_widths, "Beam widths")->delimiter(',');
  cmd_bench->add_option("--k", bench.config.k, "Neighbors per query");
  cmd_bench->add_option("--window", bench.window, "gorder window");
  cmd_bench->add_option("--groups", bench.groups, "dbg group count");
  cmd_bench->add_option("--build-s", bench.build_seconds, "Build seconds to report per row");
  cmd_bench->add_flag("!--no-warm", bench.config.warm_start, "Skip the warm-up touch pass");
  cmd_bench->add_option("--csv", bench.csv, "Report CSV path");
  cmd_bench->add_option("--json", bench.json_out, "Report JSON path");
  cmd_bench->callback([&] { run_bench(bench); });

  StatsArgs stats;
  auto* cmd_stats = app.add_subcommand("stats", "Degree histogram of an index as CSV");
  cmd_stats->add_option("--index", stats.index, "Index path")->required();
  cmd_stats->add_option("--direction", stats.direction, "out|in");
  cmd_stats->add_option("--out", stats.out, "Histogram CSV path (default: stdout)");
  cmd_stats->callback([&] { run_stats(stats); });

  TraceArgs trace;
  auto* cmd_trace = app.add_subcommand("trace", "Export the node access trace of a query set");
  cmd_trace->add_option("--index", trace.index, "Index path")->required();
  cmd_trace->add_option("--queries", trace.queries, "Query .fvecs/.bvecs path")->required();
  cmd_trace->add_option("--beam", trace.beam, "Query beam width");
  cmd_trace->add_option("--k", trace.k, "Neighbors per query");
  cmd_trace->add_option("--init", trace.init, "Seed selection: hierarchical|sample");
  cmd_trace->add_option("--sample-size", trace.sample_size, "Sample size for --init sample");
  cmd_trace->add_option("--seed", trace.seed, "Sample RNG seed");
  cmd_trace->add_option("--out", trace.out, "Output CSV path")->required();
  cmd_trace->callback([&] { run_trace(trace); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json({{"error", e.what()}}).dump() << "\n";
    return 1;
  }
  return 0;
}
