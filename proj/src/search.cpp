#include "nnro/search.hpp"

#include <numeric>
#include <queue>
#include <stdexcept>

#include "nnro/dataset.hpp"
#include "nnro/rng.hpp"
#include "visited_tags.hpp"

namespace nnro {
namespace {

thread_local detail::VisitedTags query_visited;

struct SlotEntry {
  float dist;
  uint32_t id;  // original id; every tie is broken on it so results and
                // expansion order are invariant under relocation
  uint32_t slot;
};
struct LexGreater {
  bool operator()(const SlotEntry& a, const SlotEntry& b) const {
    return a.dist > b.dist || (a.dist == b.dist && a.id > b.id);
  }
};
struct LexLess {
  bool operator()(const SlotEntry& a, const SlotEntry& b) const {
    return a.dist < b.dist || (a.dist == b.dist && a.id < b.id);
  }
};

}  // namespace

uint32_t greedy_search(const FlatIndex& index, const float* q, uint32_t seed_slot) {
  if (seed_slot >= index.size())
    throw std::invalid_argument("greedy_search: seed slot out of range");
  uint32_t cur = seed_slot;
  float cur_dist = l2_sq(q, index.vector(cur), index.dim());
  for (;;) {
    uint32_t best_slot = kInvalidId;
    uint32_t best_id = 0;
    float best_dist = 0.f;
    const uint32_t* links = index.links(cur);
    const uint32_t n = index.link_count(cur);
    for (uint32_t i = 0; i < n; ++i) {
      uint32_t s = links[i];
      float d = l2_sq(q, index.vector(s), index.dim());
      if (d >= cur_dist) continue;
      uint32_t id = index.original_id(s);
      if (best_slot == kInvalidId || d < best_dist || (d == best_dist && id < best_id)) {
        best_slot = s;
        best_id = id;
        best_dist = d;
      }
    }
    if (best_slot == kInvalidId) return cur;
    cur = best_slot;
    cur_dist = best_dist;
  }
}

SearchCandidateList beam_search(const FlatIndex& index, const float* q,
                                std::span<const uint32_t> seeds, uint32_t beam_width,
                                SearchCounters* counters, std::vector<uint32_t>* trace) {
  if (seeds.empty()) throw std::invalid_argument("beam_search: at least one seed required");
  if (beam_width == 0) throw std::invalid_argument("beam_search: beam_width must be >= 1");

  query_visited.next(index.size());
  std::priority_queue<SlotEntry, std::vector<SlotEntry>, LexGreater> frontier;
  std::priority_queue<SlotEntry, std::vector<SlotEntry>, LexLess> result;
  SearchCounters local;

  auto offer = [&](uint32_t slot, float d) {
    SlotEntry e{d, index.original_id(slot), slot};
    if (result.size() < beam_width) {
      frontier.push(e);
      result.push(e);
    } else if (d < result.top().dist) {
      // A node enters only while it strictly improves on the current worst.
      frontier.push(e);
      result.push(e);
      result.pop();
    }
  };

  for (uint32_t s : seeds) {
    if (s >= index.size()) throw std::invalid_argument("beam_search: seed slot out of range");
    if (query_visited.test_and_set(s)) continue;
    float d = l2_sq(q, index.vector(s), index.dim());
    ++local.dist_comps;
    offer(s, d);
  }

  while (!frontier.empty()) {
    SlotEntry cur = frontier.top();
    const SlotEntry& worst = result.top();
    if (result.size() == beam_width &&
        (cur.dist > worst.dist || (cur.dist == worst.dist && cur.id > worst.id)))
      break;  // every candidate still in the list has been explored
    frontier.pop();
    ++local.visited;
    if (trace) trace->push_back(cur.slot);

    const uint32_t* links = index.links(cur.slot);
    const uint32_t n = index.link_count(cur.slot);
    for (uint32_t i = 0; i < n; ++i) {
      uint32_t v = links[i];
      if (query_visited.test_and_set(v)) continue;
      float d = l2_sq(q, index.vector(v), index.dim());
      ++local.dist_comps;
      offer(v, d);
    }
  }

  SearchCandidateList out(result.size());
  for (size_t i = result.size(); i-- > 0;) {
    const SlotEntry& top = result.top();
    out[i] = {top.dist, top.id, top.slot};
    result.pop();
  }
  if (counters) {
    counters->visited += local.visited;
    counters->dist_comps += local.dist_comps;
  }
  return out;
}

uint32_t init_hierarchical(const FlatIndex& index, const float* q, SearchCounters* counters) {
  uint32_t cur = index.entry_slot();
  float cur_dist = l2_sq(q, index.vector(cur), index.dim());
  uint64_t comps = 1;

  const auto& upper = index.upper_layers();
  for (size_t l = upper.size(); l >= 1; --l) {
    const auto& layer = upper[l - 1];
    for (;;) {
      const std::vector<uint32_t>* links = layer.find(cur);
      if (!links) break;
      uint32_t best_slot = kInvalidId;
      uint32_t best_id = 0;
      float best_dist = 0.f;
      for (uint32_t s : *links) {
        float d = l2_sq(q, index.vector(s), index.dim());
        ++comps;
        if (d >= cur_dist) continue;
        uint32_t id = index.original_id(s);
        if (best_slot == kInvalidId || d < best_dist || (d == best_dist && id < best_id)) {
          best_slot = s;
          best_id = id;
          best_dist = d;
        }
      }
      if (best_slot == kInvalidId) break;
      cur = best_slot;
      cur_dist = best_dist;
    }
  }
  if (counters) counters->dist_comps += comps;
  return cur;
}

uint32_t init_random_sample(const FlatIndex& index, const float* q, uint32_t sample_size,
                            uint64_t seed, SearchCounters* counters) {
  const uint32_t n = index.size();
  if (sample_size == 0 || sample_size > n)
    throw std::invalid_argument("init_random_sample: need 1 <= sample_size <= index size");

  // Partial Fisher-Yates gives `sample_size` distinct slots deterministically.
  std::mt19937_64 rng(seed);
  std::vector<uint32_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0u);

  uint32_t best_slot = kInvalidId;
  uint32_t best_id = 0;
  float best_dist = 0.f;
  for (uint32_t i = 0; i < sample_size; ++i) {
    uint32_t j = i + static_cast<uint32_t>(bounded(rng, n - i));
    std::swap(pool[i], pool[j]);
    uint32_t slot = pool[i];
    float d = l2_sq(q, index.vector(slot), index.dim());
    uint32_t id = index.original_id(slot);
    if (best_slot == kInvalidId || d < best_dist || (d == best_dist && id < best_id)) {
      best_slot = slot;
      best_id = id;
      best_dist = d;
    }
  }
  if (counters) counters->dist_comps += sample_size;
  return best_slot;
}

SearchResult knn_query(const FlatIndex& index, const float* q, const QueryParams& params,
                       std::vector<uint32_t>* trace) {
  if (params.k == 0) throw std::invalid_argument("knn_query: k must be >= 1");
  if (params.beam_width < params.k)
    throw std::invalid_argument("knn_query: beam_width must be >= k");

  SearchResult res;
  res.truncated = params.k > index.size();
  SearchCounters counters;
  uint32_t seed =
      params.init == InitMode::kHierarchical
          ? init_hierarchical(index, q, &counters)
          : init_random_sample(index, q, params.sample_size, params.sample_seed, &counters);
  const uint32_t seeds[1] = {seed};
  SearchCandidateList cands = beam_search(index, q, seeds, params.beam_width, &counters, trace);

  const uint32_t keep = std::min<uint32_t>(params.k, static_cast<uint32_t>(cands.size()));
  res.hits.reserve(keep);
  for (uint32_t i = 0; i < keep; ++i) res.hits.push_back({cands[i].id, cands[i].dist});
  res.visited = counters.visited;
  res.dist_comps = counters.dist_comps;
  return res;
}

}  // namespace nnro
