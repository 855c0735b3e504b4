#pragma once

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

#include "nnro/dataset.hpp"
#include "nnro/graph.hpp"

namespace nnro {

// Cache-conscious single-allocation index layout. The base layer lives in one
// contiguous region of equal-size blocks, one per node:
//
//   [ header u32 ][ max_links x u32 link slots ][ dim x f32 vector ]
//
// so a block occupies 4 * (1 + max_links + dim) bytes. The header packs the
// node's original id into its low 24 bits and the live link count into the
// high 8 bits, which keeps result reporting free of a side lookup table while
// leaving traversal untouched. Links are slot indices, never original ids;
// unused link slots hold kLinkSentinel. The packing caps an index at 2^24
// nodes and 255 links per node, both enforced at construction.
class FlatIndex {
 public:
  static constexpr uint32_t kLinkSentinel = 0xFFFFFFFFu;
  static constexpr uint32_t kMaxNodes = 1u << 24;
  static constexpr uint32_t kMaxLinkCap = 255;

  // Sparse adjacency for one layer above the base, keyed by slot, ascending.
  struct UpperLayer {
    std::vector<uint32_t> slots;
    std::vector<std::vector<uint32_t>> links;

    const std::vector<uint32_t>* find(uint32_t slot) const;
    bool operator==(const UpperLayer&) const = default;
  };

  FlatIndex(uint32_t count, uint32_t dim, uint32_t max_links, MetricTag metric);

  uint32_t size() const { return count_; }
  uint32_t dim() const { return dim_; }
  uint32_t max_links() const { return max_links_; }
  MetricTag metric() const { return metric_; }
  size_t block_bytes() const { return 4u * (1u + max_links_ + dim_); }

  uint32_t entry_slot() const { return entry_slot_; }
  void set_entry_slot(uint32_t slot);

  uint32_t header(uint32_t slot) const {
    uint32_t h;
    std::memcpy(&h, block(slot), 4);
    return h;
  }
  uint32_t original_id(uint32_t slot) const { return header(slot) & 0x00FFFFFFu; }
  uint32_t link_count(uint32_t slot) const { return header(slot) >> 24; }
  const uint32_t* links(uint32_t slot) const {
    return reinterpret_cast<const uint32_t*>(block(slot) + 4);
  }
  const float* vector(uint32_t slot) const {
    return reinterpret_cast<const float*>(block(slot) + 4 + 4u * max_links_);
  }

  // Fills one block. `link_slots` holds only live links (count taken from its
  // length); the remaining slots are set to kLinkSentinel.
  void set_block(uint32_t slot, uint32_t original_id, std::span<const uint32_t> link_slots,
                 const float* vec);

  std::span<const std::byte> block_region() const { return {blocks_.data(), blocks_.size()}; }

  const std::vector<UpperLayer>& upper_layers() const { return upper_; }
  std::vector<UpperLayer>& upper_layers() { return upper_; }

  bool operator==(const FlatIndex&) const = default;

 private:
  const std::byte* block(uint32_t slot) const {
    return blocks_.data() + static_cast<size_t>(slot) * block_bytes();
  }
  std::byte* block(uint32_t slot) {
    return blocks_.data() + static_cast<size_t>(slot) * block_bytes();
  }

  uint32_t count_ = 0;
  uint32_t dim_ = 0;
  uint32_t max_links_ = 0;
  MetricTag metric_ = MetricTag::kL2Squared;
  uint32_t entry_slot_ = 0;
  std::vector<std::byte> blocks_;
  std::vector<UpperLayer> upper_;  // upper_[l - 1] is layer l
};

// Relocates every block through p (slot s moves to p.forward[s]), rewrites
// link slots, hierarchy slots and the entry slot through p. Block contents
// are otherwise untouched, so applying p1 then p2 is byte-identical to
// applying compose(p1, p2) once. Throws std::invalid_argument on an invalid
// ordering.
FlatIndex apply_ordering(const FlatIndex& index, const Ordering& p);

// Directed base-layer adjacency of the index, labeled by slot. Node levels
// are recovered from the hierarchy table. Used to feed the reorderers.
BuildGraph base_layer_graph(const FlatIndex& index);

}  // namespace nnro
