#include "nnro/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nnro {

Ordering Ordering::identity(uint32_t n) {
  Ordering p;
  p.forward.resize(n);
  std::iota(p.forward.begin(), p.forward.end(), 0u);
  p.inverse = p.forward;
  return p;
}

Ordering Ordering::from_forward(std::vector<uint32_t> fwd) {
  const uint32_t n = static_cast<uint32_t>(fwd.size());
  std::vector<uint32_t> inv(n, kInvalidId);
  for (uint32_t i = 0; i < n; ++i) {
    uint32_t slot = fwd[i];
    if (slot >= n) throw std::invalid_argument("ordering: slot out of range");
    if (inv[slot] != kInvalidId) throw std::invalid_argument("ordering: duplicate slot");
    inv[slot] = i;
  }
  Ordering p;
  p.forward = std::move(fwd);
  p.inverse = std::move(inv);
  return p;
}

bool Ordering::is_identity() const {
  for (uint32_t i = 0; i < forward.size(); ++i)
    if (forward[i] != i) return false;
  return true;
}

Ordering compose(const Ordering& first, const Ordering& then) {
  if (first.size() != then.size())
    throw std::invalid_argument("compose: orderings differ in size");
  std::vector<uint32_t> fwd(first.size());
  for (uint32_t i = 0; i < first.size(); ++i) fwd[i] = then.forward[first.forward[i]];
  return Ordering::from_forward(std::move(fwd));
}

std::vector<uint32_t> out_degrees(const BuildGraph& g) {
  std::vector<uint32_t> deg(g.size());
  for (uint32_t v = 0; v < g.size(); ++v)
    deg[v] = static_cast<uint32_t>(g.nodes[v].links[0].size());
  return deg;
}

std::vector<uint32_t> in_degrees(const BuildGraph& g) {
  std::vector<uint32_t> deg(g.size(), 0);
  for (uint32_t v = 0; v < g.size(); ++v)
    for (uint32_t u : g.nodes[v].links[0]) ++deg[u];
  return deg;
}

DegreeStats degree_stats(const BuildGraph& g, DegreeDirection direction) {
  std::vector<uint32_t> deg =
      direction == DegreeDirection::kOut ? out_degrees(g) : in_degrees(g);
  DegreeStats stats;
  stats.direction = direction;
  if (deg.empty()) return stats;

  uint32_t max_deg = *std::max_element(deg.begin(), deg.end());
  stats.histogram.assign(max_deg + 1, 0);
  uint64_t sum = 0;
  for (uint32_t d : deg) {
    ++stats.histogram[d];
    sum += d;
  }
  stats.min = *std::min_element(deg.begin(), deg.end());
  stats.max = max_deg;
  stats.mean = static_cast<double>(sum) / deg.size();
  double var = 0.0;
  for (uint32_t d : deg) {
    double delta = d - stats.mean;
    var += delta * delta;
  }
  stats.stddev = std::sqrt(var / deg.size());
  return stats;
}

BuildGraph symmetrize(const BuildGraph& g) {
  BuildGraph sym;
  sym.max_links = g.max_links;
  sym.entry_node = g.entry_node;
  sym.nodes.resize(g.size());
  for (auto& node : sym.nodes) node.links.resize(1);
  for (uint32_t u = 0; u < g.size(); ++u) {
    for (uint32_t v : g.nodes[u].links[0]) {
      sym.nodes[u].links[0].push_back(v);
      sym.nodes[v].links[0].push_back(u);
    }
  }
  for (auto& node : sym.nodes) {
    auto& adj = node.links[0];
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  return sym;
}

std::string OrderingViolation::describe() const {
  switch (kind) {
    case Kind::kLengthMismatch:
      return "ordering length mismatch at size " + std::to_string(index);
    case Kind::kSlotOutOfRange:
      return "slot " + std::to_string(value) + " out of range at index " + std::to_string(index);
    case Kind::kDuplicateSlot:
      return "duplicate slot " + std::to_string(value) + " at index " + std::to_string(index);
    case Kind::kInverseMismatch:
      return "inverse mismatch at slot " + std::to_string(index);
  }
  return "unknown violation";
}

std::optional<OrderingViolation> validate_ordering(const Ordering& p, uint32_t n) {
  using Kind = OrderingViolation::Kind;
  if (p.forward.size() != n)
    return OrderingViolation{Kind::kLengthMismatch, p.forward.size(), 0};
  if (p.inverse.size() != n)
    return OrderingViolation{Kind::kLengthMismatch, p.inverse.size(), 0};
  std::vector<uint8_t> seen(n, 0);
  for (size_t i = 0; i < n; ++i) {
    uint32_t slot = p.forward[i];
    if (slot >= n) return OrderingViolation{Kind::kSlotOutOfRange, i, slot};
    if (seen[slot]) return OrderingViolation{Kind::kDuplicateSlot, i, slot};
    seen[slot] = 1;
  }
  for (size_t s = 0; s < n; ++s) {
    uint32_t node = p.inverse[s];
    if (node >= n || p.forward[node] != s)
      return OrderingViolation{Kind::kInverseMismatch, s, node};
  }
  return std::nullopt;
}

}  // namespace nnro
