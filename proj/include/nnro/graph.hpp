#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nnro {

inline constexpr uint32_t kInvalidId = 0xFFFFFFFFu;

// Layered adjacency structure produced during construction. A node with
// level L owns one out-neighbor list per layer 0..L. Layer 0 is the base
// layer that eventually becomes the flat index.
struct BuildGraph {
  struct Node {
    uint32_t level = 0;
    std::vector<std::vector<uint32_t>> links;  // links[l] for l in [0, level]
  };

  std::vector<Node> nodes;
  uint32_t max_links = 0;  // per-node, per-layer out-degree cap
  uint32_t entry_node = kInvalidId;
  uint32_t max_level = 0;

  uint32_t size() const { return static_cast<uint32_t>(nodes.size()); }
  std::vector<uint32_t>& links_at(uint32_t node, uint32_t layer) {
    return nodes[node].links[layer];
  }
  const std::vector<uint32_t>& links_at(uint32_t node, uint32_t layer) const {
    return nodes[node].links[layer];
  }
};

// Bijection between node positions and memory slots. forward[x] is the slot
// assigned to the node currently at position x; inverse[s] is the position
// whose node lands in slot s. For a freshly flattened index positions and
// original ids coincide.
struct Ordering {
  std::vector<uint32_t> forward;
  std::vector<uint32_t> inverse;

  static Ordering identity(uint32_t n);
  // Builds the inverse side; throws std::invalid_argument if fwd is not a
  // bijection onto [0, n).
  static Ordering from_forward(std::vector<uint32_t> fwd);

  uint32_t size() const { return static_cast<uint32_t>(forward.size()); }
  bool is_identity() const;
  bool operator==(const Ordering&) const = default;
};

// Applying `first` then `then` equals applying compose(first, then) once.
Ordering compose(const Ordering& first, const Ordering& then);

enum class DegreeDirection { kOut, kIn };

struct DegreeStats {
  std::vector<uint64_t> histogram;  // histogram[d] = number of nodes with degree d
  double mean = 0.0;
  double stddev = 0.0;
  uint32_t min = 0;
  uint32_t max = 0;
  DegreeDirection direction = DegreeDirection::kOut;
};

// Base-layer degree vectors of the directed graph.
std::vector<uint32_t> out_degrees(const BuildGraph& g);
std::vector<uint32_t> in_degrees(const BuildGraph& g);

// Base-layer degree histogram and summary moments.
DegreeStats degree_stats(const BuildGraph& g, DegreeDirection direction);

// Undirected view of the base layer: edge {u, v} present iff u->v or v->u
// existed. Each edge appears in both endpoint lists, lists are sorted and
// duplicate-free, levels collapse to 0. Degree caps are not enforced.
BuildGraph symmetrize(const BuildGraph& g);

struct OrderingViolation {
  enum class Kind { kLengthMismatch, kSlotOutOfRange, kDuplicateSlot, kInverseMismatch };
  Kind kind;
  size_t index;    // first offending position
  uint32_t value;  // offending slot value (0 for length mismatch)
  std::string describe() const;
};

// Returns std::nullopt when p is a valid bijection over [0, n) with a
// consistent inverse; otherwise identifies the first violation.
std::optional<OrderingViolation> validate_ordering(const Ordering& p, uint32_t n);

}  // namespace nnro
