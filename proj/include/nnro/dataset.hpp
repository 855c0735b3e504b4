#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nnro {

enum class MetricTag : uint16_t { kL2Squared = 0 };

// Squared Euclidean distance. Used as the comparison metric everywhere;
// square roots are never taken since they do not change any ordering.
// Four accumulators keep the loop fast without -ffast-math while staying
// bit-deterministic for a given (vector, vector, dim).
inline float l2_sq(const float* a, const float* b, uint32_t dim) {
  float s0 = 0.f, s1 = 0.f, s2 = 0.f, s3 = 0.f;
  uint32_t i = 0;
  for (; i + 4 <= dim; i += 4) {
    float d0 = a[i] - b[i];
    float d1 = a[i + 1] - b[i + 1];
    float d2 = a[i + 2] - b[i + 2];
    float d3 = a[i + 3] - b[i + 3];
    s0 += d0 * d0;
    s1 += d1 * d1;
    s2 += d2 * d2;
    s3 += d3 * d3;
  }
  float tail = 0.f;
  for (; i < dim; ++i) {
    float t = a[i] - b[i];
    tail += t * t;
  }
  return ((s0 + s1) + (s2 + s3)) + tail;
}

// Row-major float32 vector collection. All rows share one dimensionality.
class VectorDataset {
 public:
  VectorDataset() = default;
  VectorDataset(uint32_t dim, std::vector<float> values);

  uint32_t size() const { return count_; }
  uint32_t dim() const { return dim_; }
  bool empty() const { return count_ == 0; }

  const float* vec(uint32_t i) const { return values_.data() + static_cast<size_t>(i) * dim_; }
  std::span<const float> row(uint32_t i) const { return {vec(i), dim_}; }
  const std::vector<float>& values() const { return values_; }

  void append(std::span<const float> v);

 private:
  uint32_t dim_ = 0;
  uint32_t count_ = 0;
  std::vector<float> values_;
};

struct LabeledDataset {
  VectorDataset data;
  std::vector<uint32_t> labels;  // labels[i] = cluster of point i
};

// Deterministic Gaussian mixture: `clusters` isotropic clusters with per-axis
// deviation `spread`, centers on distinct binary hypercube corners so every
// pair of centers is at least unit distance apart. Point i belongs to cluster
// i % clusters.
LabeledDataset synth_clusters(uint32_t n, uint32_t d, uint32_t clusters, double spread,
                              uint64_t seed);

}  // namespace nnro
