#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "nnro/graph.hpp"

namespace nnro {

enum class ReorderAlgorithm { kGorder, kRcm, kDegreeSort, kHubSort, kHubCluster, kDbg };

struct ReorderSpec {
  ReorderAlgorithm algorithm = ReorderAlgorithm::kGorder;
  uint32_t window = 5;                                   // gorder
  uint32_t groups = 8;                                   // dbg
  DegreeDirection direction = DegreeDirection::kIn;      // degree_sort only
};

// The locality objective pair: S_s(u, v) = 1 iff {u, v} is an edge, and
// S_n(u, v) = number of common neighbors. gorder greedily maximizes the sum
// of S_s + S_n over node pairs landing within `window` of each other.
//
// Greedy schedule: start at the maximum-degree node (ties: smallest id);
// each step places the unplaced node with the largest key (ties: smallest
// id), where key(v) sums S_s(u, v) + S_n(u, v) over the window of the last
// `window` placed nodes. Keys update incrementally as nodes enter and leave
// the window; extraction uses a lazy max-heap whose stale entries are
// re-checked on pop. When no unplaced node has a positive key (disconnected
// remainder or exhausted pocket), placement restarts at the maximum-degree
// unplaced node.
//
// `sym` must be a symmetrized graph (see symmetrize()).
Ordering gorder(const BuildGraph& sym, uint32_t window);

// Reverse Cuthill-McKee. Components are processed in order of their minimum
// node id; each is traversed breadth-first from its minimum-degree node
// (ties: smallest id) with neighbors enqueued in ascending degree order
// (ties: smaller id); final labels are the reverse of the visit order, which
// keeps every component in a contiguous slot range.
Ordering rcm(const BuildGraph& sym);

// Stable descending sort by the chosen directed degree; equal degrees keep
// original id order.
Ordering degree_sort(const BuildGraph& g, DegreeDirection direction);

// Nodes with in-degree strictly above the mean come first, sorted descending
// (stable); the rest follow in original order.
Ordering hub_sort(const BuildGraph& g);

// Same hub split, but hubs keep their original order too.
Ordering hub_cluster(const BuildGraph& g);

// Degree-based grouping: boundaries at the nearest-rank `groups`-quantiles of
// the descending in-degree multiset; each node joins the highest-degree group
// whose lower boundary its degree meets. Groups are emitted in descending
// degree order with original order preserved inside each group. groups=1 is
// the identity; groups=N on all-distinct degrees equals degree_sort.
Ordering dbg(const BuildGraph& g, uint32_t groups);

// Dispatch on spec.algorithm; symmetrizes internally for gorder and rcm.
// `base` is the directed base-layer graph.
Ordering make_ordering(const BuildGraph& base, const ReorderSpec& spec);

// --- ordering-quality objectives (all over a symmetrized graph) ---

// Sum of S_s + S_n over unordered pairs {u, v} with |P(u) - P(v)| < window,
// each pair counted once.
uint64_t gorder_score(const BuildGraph& sym, const Ordering& p, uint32_t window);

// Maximum |P(u) - P(v)| over edges; 0 for an empty edge set.
uint32_t bandwidth(const BuildGraph& sym, const Ordering& p);

// Sum of |P(u) - P(v)| over edges.
uint64_t linear_arrangement_cost(const BuildGraph& sym, const Ordering& p);

// Sum of log2 |P(u) - P(v)| over edges; adjacent slots contribute 0.
double log_arrangement_cost(const BuildGraph& sym, const Ordering& p);

struct OrderingScore {
  uint64_t gorder = 0;
  uint32_t bandwidth = 0;
  uint64_t linear = 0;
  double log2 = 0.0;
};
OrderingScore score_ordering(const BuildGraph& sym, const Ordering& p, uint32_t window);

const char* to_string(ReorderAlgorithm a);
// Parses tokens like "gorder", "rcm", "degree-sort-in", "degree-sort-out",
// "hub-sort", "hub-cluster", "dbg"; nullopt when unrecognized.
std::optional<ReorderSpec> parse_reorder_spec(const std::string& token);

}  // namespace nnro
