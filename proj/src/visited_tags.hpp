#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace nnro::detail {

// Epoch-tagged visited set. Bumping the epoch invalidates every mark in O(1),
// so repeated searches avoid an O(N) reset per query.
struct VisitedTags {
  std::vector<uint32_t> tags;
  uint32_t epoch = 0;

  void next(size_t n) {
    if (tags.size() < n) tags.resize(n, 0);
    if (++epoch == 0) {
      std::fill(tags.begin(), tags.end(), 0u);
      epoch = 1;
    }
  }
  bool test_and_set(uint32_t v) {
    if (tags[v] == epoch) return true;
    tags[v] = epoch;
    return false;
  }
};

}  // namespace nnro::detail
