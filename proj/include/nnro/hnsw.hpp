#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nnro/dataset.hpp"
#include "nnro/flat_index.hpp"
#include "nnro/graph.hpp"

namespace nnro {

struct BuildParams {
  uint32_t max_links = 16;          // per-node, per-layer out-degree cap
  uint32_t build_beam_width = 100;  // candidate buffer width during insertion
  double level_scale = 0.0;         // 0 selects the 1/ln(max_links) default
  uint64_t seed = 0;
  MetricTag metric = MetricTag::kL2Squared;

  double resolved_level_scale() const;
  // Throws std::invalid_argument when max_links < 1, build_beam_width <
  // max_links, or level_scale < 0.
  void validate() const;
};

// Geometric level assignment: floor(-ln(draw) * level_scale). draw must lie
// in the open interval (0, 1).
uint32_t assign_layer(double draw, double level_scale);

struct Candidate {
  float dist;
  uint32_t id;

  friend bool operator<(const Candidate& a, const Candidate& b) {
    return a.dist < b.dist || (a.dist == b.dist && a.id < b.id);
  }
  friend bool operator==(const Candidate& a, const Candidate& b) = default;
};
using CandidateList = std::vector<Candidate>;

// Diversity pruning. Scans `sorted` (ascending by (dist, id) from `base`) and
// keeps a candidate c only when no already-kept s is closer to c than base
// is, i.e. dist(c, s) >= dist(c, base) for every kept s. Stops after
// max_links keeps. Returns kept ids in scan order.
std::vector<uint32_t> prune_neighbors(const VectorDataset& data, uint32_t base,
                                      const CandidateList& sorted, uint32_t max_links);

// Inserts node new_id (must equal g.size(); ids are dataset positions and
// each id is inserted exactly once). Draws the level from rng, descends
// greedily through layers above it, then on each layer at or below runs a
// beam search of width build_beam_width, prunes the candidates to max_links
// out-links, and adds reciprocal edges, re-pruning any neighbor pushed over
// the cap. Becomes the entry point when its level exceeds the current max.
void insert_node(BuildGraph& g, const VectorDataset& data, uint32_t new_id,
                 const BuildParams& params, std::mt19937_64& rng);

// Inserts all dataset points in order. Deterministic for a fixed
// (dataset, params, seed). Throws std::invalid_argument on an empty dataset.
BuildGraph build_index(const VectorDataset& data, const BuildParams& params);

// Emits the base layer as contiguous equal-size blocks in original-id order
// (slot == id), populates the hierarchy table and entry slot.
FlatIndex flatten(const BuildGraph& g, const VectorDataset& data);

}  // namespace nnro
