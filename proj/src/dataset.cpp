#include "nnro/dataset.hpp"

#include <stdexcept>

#include "nnro/rng.hpp"

namespace nnro {

VectorDataset::VectorDataset(uint32_t dim, std::vector<float> values)
    : dim_(dim), values_(std::move(values)) {
  if (dim == 0) throw std::invalid_argument("dataset dimension must be positive");
  if (values_.size() % dim != 0)
    throw std::invalid_argument("dataset value count is not a multiple of the dimension");
  count_ = static_cast<uint32_t>(values_.size() / dim);
}

void VectorDataset::append(std::span<const float> v) {
  if (dim_ == 0) {
    if (v.empty()) throw std::invalid_argument("cannot append an empty vector");
    dim_ = static_cast<uint32_t>(v.size());
  }
  if (v.size() != dim_) throw std::invalid_argument("appended vector has mismatched dimension");
  values_.insert(values_.end(), v.begin(), v.end());
  ++count_;
}

LabeledDataset synth_clusters(uint32_t n, uint32_t d, uint32_t clusters, double spread,
                              uint64_t seed) {
  if (n == 0) throw std::invalid_argument("synth_clusters: n must be positive");
  if (d == 0) throw std::invalid_argument("synth_clusters: d must be positive");
  if (clusters == 0 || clusters > n)
    throw std::invalid_argument("synth_clusters: need 1 <= clusters <= n");
  if (spread < 0.0) throw std::invalid_argument("synth_clusters: spread must be non-negative");
  if (d < 31 && clusters > (1u << d))
    throw std::invalid_argument("synth_clusters: more clusters than hypercube corners");

  // Center of cluster j sits on the hypercube corner spelled by j's bits, so
  // any two centers differ in at least one axis by 1.
  auto center_coord = [](uint32_t cluster, uint32_t axis) -> float {
    if (axis >= 31) return 0.f;
    return static_cast<float>((cluster >> axis) & 1u);
  };

  std::mt19937_64 rng(seed);
  std::vector<float> values;
  values.reserve(static_cast<size_t>(n) * d);
  std::vector<uint32_t> labels(n);
  for (uint32_t i = 0; i < n; ++i) {
    uint32_t cluster = i % clusters;
    labels[i] = cluster;
    for (uint32_t axis = 0; axis < d; ++axis) {
      double noise = spread * gaussian(rng);
      values.push_back(center_coord(cluster, axis) + static_cast<float>(noise));
    }
  }
  return {VectorDataset(d, std::move(values)), std::move(labels)};
}

}  // namespace nnro
