#include "nnro/hnsw.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "nnro/rng.hpp"
#include "visited_tags.hpp"

namespace nnro {

double BuildParams::resolved_level_scale() const {
  if (level_scale > 0.0) return level_scale;
  return 1.0 / std::log(static_cast<double>(std::max(max_links, 2u)));
}

void BuildParams::validate() const {
  if (max_links < 1) throw std::invalid_argument("build params: max_links must be >= 1");
  if (build_beam_width < max_links)
    throw std::invalid_argument("build params: build_beam_width must be >= max_links");
  if (level_scale < 0.0)
    throw std::invalid_argument("build params: level_scale must be non-negative");
}

uint32_t assign_layer(double draw, double level_scale) {
  if (!(draw > 0.0) || !(draw < 1.0))
    throw std::invalid_argument("assign_layer: draw must lie in (0, 1)");
  if (level_scale < 0.0)
    throw std::invalid_argument("assign_layer: level_scale must be non-negative");
  return static_cast<uint32_t>(std::floor(-std::log(draw) * level_scale));
}

std::vector<uint32_t> prune_neighbors(const VectorDataset& data, uint32_t base,
                                      const CandidateList& sorted, uint32_t max_links) {
  std::vector<uint32_t> kept;
  kept.reserve(std::min<size_t>(sorted.size(), max_links));
  for (const Candidate& c : sorted) {
    if (kept.size() >= max_links) break;
    if (c.id == base) continue;
    const float* cv = data.vec(c.id);
    bool keep = true;
    for (uint32_t s : kept) {
      // Drop c when it is closer to an already-kept neighbor than to base,
      // or when it duplicates one.
      if (s == c.id || l2_sq(cv, data.vec(s), data.dim()) < c.dist) {
        keep = false;
        break;
      }
    }
    if (keep) kept.push_back(c.id);
  }
  return kept;
}

namespace {

struct HeapEntry {
  float dist;
  uint32_t id;
};
struct LexGreater {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    return a.dist > b.dist || (a.dist == b.dist && a.id > b.id);
  }
};
struct LexLess {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    return a.dist < b.dist || (a.dist == b.dist && a.id < b.id);
  }
};

thread_local detail::VisitedTags build_visited;

uint32_t greedy_at_layer(const BuildGraph& g, const VectorDataset& data, const float* q,
                         uint32_t start, uint32_t layer) {
  uint32_t cur = start;
  float cur_dist = l2_sq(q, data.vec(cur), data.dim());
  for (;;) {
    uint32_t best = kInvalidId;
    float best_dist = 0.f;
    for (uint32_t v : g.links_at(cur, layer)) {
      float d = l2_sq(q, data.vec(v), data.dim());
      if (d >= cur_dist) continue;
      if (best == kInvalidId || d < best_dist || (d == best_dist && v < best)) {
        best = v;
        best_dist = d;
      }
    }
    if (best == kInvalidId) return cur;
    cur = best;
    cur_dist = best_dist;
  }
}

CandidateList beam_at_layer(const BuildGraph& g, const VectorDataset& data, const float* q,
                            uint32_t start, uint32_t width, uint32_t layer) {
  build_visited.next(g.size());
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, LexGreater> frontier;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, LexLess> result;

  float d0 = l2_sq(q, data.vec(start), data.dim());
  build_visited.test_and_set(start);
  frontier.push({d0, start});
  result.push({d0, start});

  while (!frontier.empty()) {
    HeapEntry cur = frontier.top();
    HeapEntry worst = result.top();
    if (result.size() == width &&
        (cur.dist > worst.dist || (cur.dist == worst.dist && cur.id > worst.id)))
      break;  // nearest unexplored already falls outside the candidate list
    frontier.pop();
    for (uint32_t v : g.links_at(cur.id, layer)) {
      if (build_visited.test_and_set(v)) continue;
      float d = l2_sq(q, data.vec(v), data.dim());
      if (result.size() < width) {
        frontier.push({d, v});
        result.push({d, v});
      } else if (d < result.top().dist) {
        frontier.push({d, v});
        result.push({d, v});
        result.pop();
      }
    }
  }

  CandidateList out(result.size());
  for (size_t i = result.size(); i-- > 0;) {
    out[i] = {result.top().dist, result.top().id};
    result.pop();
  }
  return out;
}

}  // namespace

void insert_node(BuildGraph& g, const VectorDataset& data, uint32_t new_id,
                 const BuildParams& params, std::mt19937_64& rng) {
  params.validate();
  if (new_id != g.size())
    throw std::invalid_argument("insert_node: ids must be inserted in dataset order, once each");
  if (new_id >= data.size())
    throw std::invalid_argument("insert_node: id has no vector in the dataset");
  if (g.size() == 0) g.max_links = params.max_links;
  if (g.max_links != params.max_links)
    throw std::invalid_argument("insert_node: max_links differs from the graph's cap");

  uint32_t level = assign_layer(unit_open(rng), params.resolved_level_scale());
  BuildGraph::Node node;
  node.level = level;
  node.links.resize(level + 1);
  g.nodes.push_back(std::move(node));

  if (new_id == 0) {
    g.entry_node = 0;
    g.max_level = level;
    return;
  }

  const float* q = data.vec(new_id);
  uint32_t ep = g.entry_node;
  for (uint32_t l = g.max_level; l > level; --l) ep = greedy_at_layer(g, data, q, ep, l);

  for (int64_t l = std::min(level, g.max_level); l >= 0; --l) {
    uint32_t layer = static_cast<uint32_t>(l);
    CandidateList cands = beam_at_layer(g, data, q, ep, params.build_beam_width, layer);
    std::vector<uint32_t> selected = prune_neighbors(data, new_id, cands, params.max_links);
    g.links_at(new_id, layer) = selected;
    for (uint32_t s : selected) {
      auto& back_links = g.links_at(s, layer);
      back_links.push_back(new_id);
      if (back_links.size() > params.max_links) {
        // Over the cap: re-run the pruning rule on the full current list.
        CandidateList full;
        full.reserve(back_links.size());
        const float* sv = data.vec(s);
        for (uint32_t v : back_links) full.push_back({l2_sq(sv, data.vec(v), data.dim()), v});
        std::sort(full.begin(), full.end());
        back_links = prune_neighbors(data, s, full, params.max_links);
      }
    }
    ep = cands.front().id;
  }

  if (level > g.max_level) {
    g.max_level = level;
    g.entry_node = new_id;
  }
}

BuildGraph build_index(const VectorDataset& data, const BuildParams& params) {
  params.validate();
  if (data.empty()) throw std::invalid_argument("build_index: dataset is empty");
  BuildGraph g;
  g.max_links = params.max_links;
  std::mt19937_64 rng(params.seed);
  for (uint32_t id = 0; id < data.size(); ++id) insert_node(g, data, id, params, rng);
  return g;
}

FlatIndex flatten(const BuildGraph& g, const VectorDataset& data) {
  if (g.size() == 0) throw std::invalid_argument("flatten: graph is empty");
  if (g.size() != data.size())
    throw std::invalid_argument("flatten: graph and dataset sizes differ");
  if (g.entry_node >= g.size())
    throw std::invalid_argument("flatten: entry node unset or out of range");

  FlatIndex index(g.size(), data.dim(), g.max_links, MetricTag::kL2Squared);
  for (uint32_t v = 0; v < g.size(); ++v) {
    const auto& node = g.nodes[v];
    if (node.level > g.max_level)
      throw std::invalid_argument("flatten: node level exceeds the graph's max level");
    const auto& links = node.links[0];
    if (links.size() > g.max_links)
      throw std::invalid_argument("flatten: base-layer out-degree exceeds the cap");
    for (uint32_t u : links)
      if (u == v) throw std::invalid_argument("flatten: self-loop in the base layer");
    index.set_block(v, v, links, data.vec(v));
  }

  auto& upper = index.upper_layers();
  upper.resize(g.max_level);
  for (uint32_t v = 0; v < g.size(); ++v) {
    for (uint32_t l = 1; l <= g.nodes[v].level; ++l) {
      upper[l - 1].slots.push_back(v);
      upper[l - 1].links.push_back(g.nodes[v].links[l]);
    }
  }
  index.set_entry_slot(g.entry_node);
  return index;
}

}  // namespace nnro
