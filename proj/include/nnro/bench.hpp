#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nnro/dataset.hpp"
#include "nnro/flat_index.hpp"
#include "nnro/graph.hpp"
#include "nnro/search.hpp"

namespace nnro {

// Exact k nearest neighbors by (distance, id); ids ascending by rank.
std::vector<uint32_t> brute_force_knn(const VectorDataset& data, const float* q, uint32_t k);

// Ground truth for a whole query set. threads = 0 picks the hardware count.
// Untimed, so parallelism is fair game; per-query output is deterministic.
std::vector<std::vector<uint32_t>> brute_force_all(const VectorDataset& data,
                                                   const VectorDataset& queries, uint32_t k,
                                                   unsigned threads = 0);

struct Recall {
  double value = 0.0;
  bool truncated = false;  // a list was shorter than k
};
// |top-k(results) n top-k(truth)| / k, computed over the available prefix and
// flagged when either list is shorter than k.
Recall recall_at(std::span<const uint32_t> results, std::span<const uint32_t> truth, uint32_t k);

// Nearest-rank percentile: the value at 1-based index ceil(pct/100 * n) of
// the ascending sort. pct in (0, 100].
double nearest_rank_percentile(std::span<const double> samples, double pct);

struct LatencyStats {
  double mean = 0.0;
  double p99 = 0.0;
};
// Throws std::invalid_argument on an empty sample set.
LatencyStats latency_stats(std::span<const double> samples);

// baseline_mean / candidate_mean; both must be positive.
double speedup(double baseline_mean, double candidate_mean);

struct NamedOrdering {
  std::string name;
  Ordering ordering;
  double reorder_seconds = 0.0;
};

struct BenchConfig {
  uint32_t query_count = 10000;  // queries used per pass (capped by the set)
  uint32_t repetitions = 5;
  std::vector<uint32_t> beam_widths = {100, 200, 500, 1000, 2000, 5000};
  uint32_t k = 100;
  bool warm_start = true;     // touch the whole index before timing
  double build_seconds = 0.0; // reported per row
};

struct BenchRow {
  std::string ordering;
  uint32_t beam_width = 0;
  double recall = 0.0;
  double mean_us = 0.0;
  double p99_us = 0.0;
  double speedup = 0.0;
  double dist_comps = 0.0;  // mean per query
  double reorder_seconds = 0.0;
  double build_seconds = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  uint32_t query_count = 0;
  uint32_t repetitions = 0;
  uint32_t k = 0;
};

// Single-threaded timed sweep producing exactly |orderings| x |beam_widths|
// rows. The original layout is always measured first as the speedup
// reference. For each ordering the index is relocated with apply_ordering,
// warmed, run once untimed to collect result sets, recall and
// distance-computation counts, then timed `repetitions` times over the query
// batch. Mean latency is the grand mean across repetitions; p99 is the
// nearest-rank percentile over all per-query samples. Speedups compare mean
// latency against the original layout at the same beam width; identity
// entries reuse the reference measurements, so their speedup reads exactly
// 1.0. Result sets are deterministic across orderings and repetitions; only
// timings and the slots inside traces vary.
BenchReport run_benchmark(const FlatIndex& index, const std::vector<NamedOrdering>& orderings,
                          const VectorDataset& queries,
                          const std::vector<std::vector<uint32_t>>& truth,
                          const BenchConfig& config);

struct TraceEntry {
  uint32_t query;  // query ordinal
  uint32_t slot;   // expanded slot, in visit order
  bool operator==(const TraceEntry&) const = default;
};

// Replays the query set and records every base-layer node expansion, in
// order, for external cache simulation. Trace length per query equals the
// query's visited counter.
std::vector<TraceEntry> export_access_trace(const FlatIndex& index, const VectorDataset& queries,
                                            const QueryParams& params);

void write_trace_csv(std::ostream& out, std::span<const TraceEntry> trace);
void write_report_csv(std::ostream& out, const BenchReport& report);
void write_report_json(std::ostream& out, const BenchReport& report);

}  // namespace nnro
