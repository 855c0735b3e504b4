#include "nnro/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "json.hpp"

namespace nnro {

std::vector<uint32_t> brute_force_knn(const VectorDataset& data, const float* q, uint32_t k) {
  if (data.empty()) throw std::invalid_argument("brute_force_knn: empty dataset");
  if (k == 0) throw std::invalid_argument("brute_force_knn: k must be positive");
  const uint32_t n = data.size();
  const uint32_t kept = std::min(k, n);
  std::vector<std::pair<float, uint32_t>> pairs(n);
  for (uint32_t i = 0; i < n; ++i) pairs[i] = {l2_sq(q, data.vec(i), data.dim()), i};
  std::nth_element(pairs.begin(), pairs.begin() + kept - 1, pairs.end());
  std::sort(pairs.begin(), pairs.begin() + kept);
  std::vector<uint32_t> ids(kept);
  for (uint32_t i = 0; i < kept; ++i) ids[i] = pairs[i].second;
  return ids;
}

std::vector<std::vector<uint32_t>> brute_force_all(const VectorDataset& data,
                                                   const VectorDataset& queries, uint32_t k,
                                                   unsigned threads) {
  if (queries.empty()) return {};
  if (queries.dim() != data.dim())
    throw std::invalid_argument("brute_force_all: query dimension does not match the dataset");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, queries.size());
  std::vector<std::vector<uint32_t>> out(queries.size());
  if (threads <= 1) {
    for (uint32_t q = 0; q < queries.size(); ++q) out[q] = brute_force_knn(data, queries.vec(q), k);
    return out;
  }
  std::atomic<uint32_t> next{0};
  auto worker = [&] {
    for (;;) {
      const uint32_t q = next.fetch_add(1);
      if (q >= queries.size()) return;
      out[q] = brute_force_knn(data, queries.vec(q), k);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

Recall recall_at(std::span<const uint32_t> results, std::span<const uint32_t> truth, uint32_t k) {
  if (k == 0) throw std::invalid_argument("recall_at: k must be positive");
  Recall r;
  r.truncated = results.size() < k || truth.size() < k;
  std::vector<uint32_t> a(results.begin(), results.begin() + std::min<size_t>(k, results.size()));
  std::vector<uint32_t> b(truth.begin(), truth.begin() + std::min<size_t>(k, truth.size()));
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  size_t i = 0, j = 0, matches = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (b[j] < a[i]) ++j;
    else { ++matches; ++i; ++j; }
  }
  r.value = static_cast<double>(matches) / k;
  return r;
}

double nearest_rank_percentile(std::span<const double> samples, double pct) {
  if (samples.empty()) throw std::invalid_argument("nearest_rank_percentile: no samples");
  if (!(pct > 0.0) || pct > 100.0)
    throw std::invalid_argument("nearest_rank_percentile: pct must be in (0, 100]");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  size_t rank = static_cast<size_t>(std::ceil(pct * static_cast<double>(sorted.size()) / 100.0));
  rank = std::clamp<size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

LatencyStats latency_stats(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("latency_stats: no samples");
  double sum = 0.0;
  for (double s : samples) sum += s;
  return {sum / static_cast<double>(samples.size()), nearest_rank_percentile(samples, 99.0)};
}

double speedup(double baseline_mean, double candidate_mean) {
  if (!(baseline_mean > 0.0) || !(candidate_mean > 0.0))
    throw std::invalid_argument("speedup: means must be positive");
  return baseline_mean / candidate_mean;
}

namespace {

// Keeps the optimizer from discarding warm-up reads and timed results.
volatile uint64_t g_sink = 0;

void warm_index(const FlatIndex& index) {
  const auto region = index.block_region();
  uint64_t acc = 0;
  for (size_t i = 0; i + 8 <= region.size(); i += 64) {
    uint64_t w;
    std::memcpy(&w, region.data() + i, 8);
    acc += w;
  }
  for (const auto& layer : index.upper_layers())
    for (uint32_t s : layer.slots) acc += s;
  g_sink = g_sink + acc;
}

struct SweepStats {
  double recall = 0.0;
  double mean_us = 0.0;
  double p99_us = 0.0;
  double dist_comps = 0.0;
};

SweepStats measure(const FlatIndex& index, const VectorDataset& queries, uint32_t used,
                   const std::vector<std::vector<uint32_t>>& truth, uint32_t beam_width,
                   const BenchConfig& config) {
  QueryParams params;
  params.beam_width = beam_width;
  params.k = config.k;
  params.init = InitMode::kHierarchical;
  if (config.warm_start) warm_index(index);

  // Untimed pass: quality and work counters.
  double recall_sum = 0.0;
  uint64_t comps = 0;
  std::vector<uint32_t> ids;
  ids.reserve(config.k);
  for (uint32_t q = 0; q < used; ++q) {
    const SearchResult res = knn_query(index, queries.vec(q), params);
    ids.clear();
    for (const Neighbor& h : res.hits) ids.push_back(h.id);
    recall_sum += recall_at(ids, truth[q], config.k).value;
    comps += res.dist_comps;
  }

  // Timed passes: one latency sample per query per repetition.
  std::vector<double> samples;
  samples.reserve(static_cast<size_t>(used) * config.repetitions);
  for (uint32_t rep = 0; rep < config.repetitions; ++rep) {
    for (uint32_t q = 0; q < used; ++q) {
      const auto t0 = std::chrono::steady_clock::now();
      const SearchResult res = knn_query(index, queries.vec(q), params);
      const auto t1 = std::chrono::steady_clock::now();
      g_sink = g_sink + (res.hits.empty() ? 0u : res.hits.front().id);
      samples.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
    }
  }
  const LatencyStats lat = latency_stats(samples);
  return {recall_sum / used, lat.mean, lat.p99, static_cast<double>(comps) / used};
}

}  // namespace

BenchReport run_benchmark(const FlatIndex& index, const std::vector<NamedOrdering>& orderings,
                          const VectorDataset& queries,
                          const std::vector<std::vector<uint32_t>>& truth,
                          const BenchConfig& config) {
  if (queries.empty()) throw std::invalid_argument("run_benchmark: no queries");
  if (queries.dim() != index.dim())
    throw std::invalid_argument("run_benchmark: query dimension does not match the index");
  if (config.repetitions == 0) throw std::invalid_argument("run_benchmark: repetitions must be positive");
  if (config.k == 0) throw std::invalid_argument("run_benchmark: k must be positive");
  if (config.query_count == 0) throw std::invalid_argument("run_benchmark: query_count must be positive");
  if (config.beam_widths.empty()) throw std::invalid_argument("run_benchmark: no beam widths");
  for (uint32_t b : config.beam_widths)
    if (b < config.k) throw std::invalid_argument("run_benchmark: beam width below k");
  const uint32_t used = std::min<uint32_t>(config.query_count, queries.size());
  if (truth.size() < used)
    throw std::invalid_argument("run_benchmark: ground truth is shorter than the query batch");
  for (const NamedOrdering& no : orderings)
    if (no.ordering.size() != index.size())
      throw std::invalid_argument("run_benchmark: ordering size does not match the index");

  BenchReport report;
  report.query_count = used;
  report.repetitions = config.repetitions;
  report.k = config.k;

  // Original layout first; it anchors every speedup column.
  std::vector<SweepStats> baseline;
  baseline.reserve(config.beam_widths.size());
  for (uint32_t b : config.beam_widths)
    baseline.push_back(measure(index, queries, used, truth, b, config));

  auto emit = [&](const std::string& name, double reorder_seconds,
                  const std::vector<SweepStats>& stats, bool is_baseline) {
    for (size_t i = 0; i < config.beam_widths.size(); ++i) {
      BenchRow row;
      row.ordering = name;
      row.beam_width = config.beam_widths[i];
      row.recall = stats[i].recall;
      row.mean_us = stats[i].mean_us;
      row.p99_us = stats[i].p99_us;
      row.speedup = is_baseline ? 1.0 : speedup(baseline[i].mean_us, stats[i].mean_us);
      row.dist_comps = stats[i].dist_comps;
      row.reorder_seconds = reorder_seconds;
      row.build_seconds = config.build_seconds;
      report.rows.push_back(std::move(row));
    }
  };

  for (const NamedOrdering& no : orderings) {
    if (no.ordering.is_identity()) {
      // Identity relocation cannot change the layout; reuse the baseline
      // measurements so its speedup reads exactly 1.0.
      emit(no.name, no.reorder_seconds, baseline, true);
      continue;
    }
    const FlatIndex reordered = apply_ordering(index, no.ordering);
    std::vector<SweepStats> stats;
    stats.reserve(config.beam_widths.size());
    for (uint32_t b : config.beam_widths)
      stats.push_back(measure(reordered, queries, used, truth, b, config));
    emit(no.name, no.reorder_seconds, stats, false);
  }
  return report;
}

std::vector<TraceEntry> export_access_trace(const FlatIndex& index, const VectorDataset& queries,
                                            const QueryParams& params) {
  if (queries.empty()) throw std::invalid_argument("export_access_trace: no queries");
  if (queries.dim() != index.dim())
    throw std::invalid_argument("export_access_trace: query dimension does not match the index");
  std::vector<TraceEntry> out;
  std::vector<uint32_t> trace;
  for (uint32_t q = 0; q < queries.size(); ++q) {
    trace.clear();
    knn_query(index, queries.vec(q), params, &trace);
    for (uint32_t slot : trace) out.push_back({q, slot});
  }
  return out;
}

void write_trace_csv(std::ostream& out, std::span<const TraceEntry> trace) {
  out << "query,slot\n";
  for (const TraceEntry& e : trace) out << e.query << ',' << e.slot << '\n';
}

void write_report_csv(std::ostream& out, const BenchReport& report) {
  out << "ordering,M_q,recall,mean_us,p99_us,speedup,dist_comps,reorder_s,build_s\n";
  char buf[224];
  for (const BenchRow& r : report.rows) {
    std::snprintf(buf, sizeof buf, ",%u,%.6f,%.3f,%.3f,%.6f,%.2f,%.6f,%.6f\n", r.beam_width,
                  r.recall, r.mean_us, r.p99_us, r.speedup, r.dist_comps, r.reorder_seconds,
                  r.build_seconds);
    out << r.ordering << buf;
  }
}

void write_report_json(std::ostream& out, const BenchReport& report) {
  nlohmann::json j;
  j["query_count"] = report.query_count;
  j["repetitions"] = report.repetitions;
  j["k"] = report.k;
  auto rows = nlohmann::json::array();
  for (const BenchRow& r : report.rows) {
    rows.push_back({{"ordering", r.ordering},
                    {"M_q", r.beam_width},
                    {"recall", r.recall},
                    {"mean_us", r.mean_us},
                    {"p99_us", r.p99_us},
                    {"speedup", r.speedup},
                    {"dist_comps", r.dist_comps},
                    {"reorder_s", r.reorder_seconds},
                    {"build_s", r.build_seconds}});
  }
  j["rows"] = std::move(rows);
  out << j.dump(2) << '\n';
}

}  // namespace nnro
