#include "nnro/flat_index.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace nnro {

const std::vector<uint32_t>* FlatIndex::UpperLayer::find(uint32_t slot) const {
  auto it = std::lower_bound(slots.begin(), slots.end(), slot);
  if (it == slots.end() || *it != slot) return nullptr;
  return &links[static_cast<size_t>(it - slots.begin())];
}

FlatIndex::FlatIndex(uint32_t count, uint32_t dim, uint32_t max_links, MetricTag metric)
    : count_(count), dim_(dim), max_links_(max_links), metric_(metric) {
  if (count == 0) throw std::invalid_argument("flat index: node count must be positive");
  if (count >= kMaxNodes)
    throw std::invalid_argument("flat index: node count exceeds the 24-bit id space");
  if (dim == 0) throw std::invalid_argument("flat index: dimension must be positive");
  if (max_links == 0 || max_links > kMaxLinkCap)
    throw std::invalid_argument("flat index: max_links must be in [1, 255]");
  blocks_.assign(static_cast<size_t>(count) * block_bytes(), std::byte{0});
}

void FlatIndex::set_entry_slot(uint32_t slot) {
  if (slot >= count_) throw std::invalid_argument("flat index: entry slot out of range");
  entry_slot_ = slot;
}

void FlatIndex::set_block(uint32_t slot, uint32_t original_id,
                          std::span<const uint32_t> link_slots, const float* vec) {
  if (slot >= count_) throw std::invalid_argument("flat index: block slot out of range");
  if (original_id >= count_)
    throw std::invalid_argument("flat index: original id out of range");
  if (link_slots.size() > max_links_)
    throw std::invalid_argument("flat index: too many links for slot " + std::to_string(slot));
  std::byte* b = block(slot);
  uint32_t header = (static_cast<uint32_t>(link_slots.size()) << 24) | original_id;
  std::memcpy(b, &header, 4);
  uint32_t* links = reinterpret_cast<uint32_t*>(b + 4);
  for (size_t i = 0; i < link_slots.size(); ++i) {
    if (link_slots[i] >= count_)
      throw std::invalid_argument("flat index: link slot out of range");
    links[i] = link_slots[i];
  }
  for (size_t i = link_slots.size(); i < max_links_; ++i) links[i] = kLinkSentinel;
  std::memcpy(b + 4 + 4u * max_links_, vec, 4u * static_cast<size_t>(dim_));
}

FlatIndex apply_ordering(const FlatIndex& index, const Ordering& p) {
  if (auto violation = validate_ordering(p, index.size()))
    throw std::invalid_argument("apply_ordering: " + violation->describe());

  FlatIndex out(index.size(), index.dim(), index.max_links(), index.metric());
  std::vector<uint32_t> remapped;
  remapped.reserve(index.max_links());
  for (uint32_t s = 0; s < index.size(); ++s) {
    remapped.clear();
    const uint32_t* links = index.links(s);
    for (uint32_t i = 0; i < index.link_count(s); ++i)
      remapped.push_back(p.forward[links[i]]);
    out.set_block(p.forward[s], index.original_id(s), remapped, index.vector(s));
  }

  auto& upper = out.upper_layers();
  upper.resize(index.upper_layers().size());
  for (size_t l = 0; l < index.upper_layers().size(); ++l) {
    const auto& src = index.upper_layers()[l];
    // Remap then restore the ascending-slot invariant.
    std::vector<std::pair<uint32_t, std::vector<uint32_t>>> entries;
    entries.reserve(src.slots.size());
    for (size_t i = 0; i < src.slots.size(); ++i) {
      std::vector<uint32_t> links = src.links[i];
      for (uint32_t& v : links) v = p.forward[v];
      entries.emplace_back(p.forward[src.slots[i]], std::move(links));
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    upper[l].slots.reserve(entries.size());
    upper[l].links.reserve(entries.size());
    for (auto& [slot, links] : entries) {
      upper[l].slots.push_back(slot);
      upper[l].links.push_back(std::move(links));
    }
  }
  out.set_entry_slot(p.forward[index.entry_slot()]);
  return out;
}

BuildGraph base_layer_graph(const FlatIndex& index) {
  BuildGraph g;
  g.max_links = index.max_links();
  g.entry_node = index.entry_slot();
  g.nodes.resize(index.size());
  for (size_t l = 0; l < index.upper_layers().size(); ++l) {
    for (uint32_t slot : index.upper_layers()[l].slots) {
      uint32_t level = static_cast<uint32_t>(l + 1);
      if (g.nodes[slot].level < level) g.nodes[slot].level = level;
      g.max_level = std::max(g.max_level, level);
    }
  }
  for (uint32_t s = 0; s < index.size(); ++s) {
    auto& node = g.nodes[s];
    node.links.resize(node.level + 1);
    const uint32_t* links = index.links(s);
    node.links[0].assign(links, links + index.link_count(s));
  }
  for (size_t l = 0; l < index.upper_layers().size(); ++l) {
    const auto& layer = index.upper_layers()[l];
    for (size_t i = 0; i < layer.slots.size(); ++i)
      g.nodes[layer.slots[i]].links[l + 1] = layer.links[i];
  }
  return g;
}

}  // namespace nnro
