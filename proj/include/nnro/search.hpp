#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nnro/flat_index.hpp"

namespace nnro {

enum class InitMode { kHierarchical, kRandomSample };

struct QueryParams {
  uint32_t beam_width = 100;  // dynamic candidate list size; must be >= k
  uint32_t k = 10;
  InitMode init = InitMode::kHierarchical;
  uint32_t sample_size = 50;  // random-sample init only
  uint64_t sample_seed = 0;
};

struct SearchCounters {
  uint64_t visited = 0;     // nodes expanded (blocks whose links were walked)
  uint64_t dist_comps = 0;  // metric evaluations
};

struct SearchCandidate {
  float dist;
  uint32_t id;    // original id, ordering-invariant
  uint32_t slot;  // current memory slot

  friend bool operator<(const SearchCandidate& a, const SearchCandidate& b) {
    return a.dist < b.dist || (a.dist == b.dist && a.id < b.id);
  }
};
using SearchCandidateList = std::vector<SearchCandidate>;

struct Neighbor {
  uint32_t id;
  float dist;
  bool operator==(const Neighbor&) const = default;
};

struct SearchResult {
  std::vector<Neighbor> hits;  // ascending (dist, id), no duplicates
  uint64_t visited = 0;
  uint64_t dist_comps = 0;
  bool truncated = false;  // set when k exceeded the index size
};

// Base-layer greedy walk: repeatedly moves to the out-neighbor strictly
// closer to q than the current node (nearest such neighbor, ties by smaller
// original id) and stops at the first local minimum. Returns its slot.
uint32_t greedy_search(const FlatIndex& index, const float* q, uint32_t seed_slot);

// Base-layer beam search with a candidate list of `beam_width` best nodes
// ordered by (dist, original id). Repeatedly expands the nearest unexplored
// candidate; a node enters the list only while it improves on the current
// worst distance; terminates once the nearest unexplored node falls outside
// the list. Each node's distance is computed at most once. With beam_width 1
// and a single seed this visits exactly the greedy walk. Appends expanded
// slots to *trace when given.
SearchCandidateList beam_search(const FlatIndex& index, const float* q,
                                std::span<const uint32_t> seeds, uint32_t beam_width,
                                SearchCounters* counters = nullptr,
                                std::vector<uint32_t>* trace = nullptr);

// Greedy descent from the entry slot through the upper layers; returns the
// base-layer seed slot. Indexes without a hierarchy yield the entry slot.
uint32_t init_hierarchical(const FlatIndex& index, const float* q,
                           SearchCounters* counters = nullptr);

// Samples `sample_size` distinct slots with a seeded rng and returns the one
// nearest to q (ties by smaller original id). Note the sample is over memory
// slots, so unlike hierarchical init the outcome depends on the layout.
uint32_t init_random_sample(const FlatIndex& index, const float* q, uint32_t sample_size,
                            uint64_t seed, SearchCounters* counters = nullptr);

// Full query: init picks the seed, beam search explores the base layer, the
// k best candidates come back as (original id, distance). When k exceeds the
// index size all nodes are returned and the result is flagged truncated.
SearchResult knn_query(const FlatIndex& index, const float* q, const QueryParams& params,
                       std::vector<uint32_t>* trace = nullptr);

}  // namespace nnro
