#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "nnro/dataset.hpp"
#include "nnro/graph.hpp"

namespace helpers {

// Single-layer graph from an explicit directed adjacency list.
inline nnro::BuildGraph graph_from_adjacency(std::vector<std::vector<uint32_t>> adj,
                                             uint32_t max_links = 0) {
  nnro::BuildGraph g;
  g.nodes.resize(adj.size());
  size_t maxdeg = 1;
  for (size_t i = 0; i < adj.size(); ++i) {
    g.nodes[i].level = 0;
    maxdeg = std::max(maxdeg, adj[i].size());
    g.nodes[i].links.push_back(std::move(adj[i]));
  }
  g.max_links = max_links ? max_links : static_cast<uint32_t>(maxdeg);
  g.entry_node = g.nodes.empty() ? nnro::kInvalidId : 0;
  g.max_level = 0;
  return g;
}

// Undirected edge list -> symmetric, sorted, duplicate-free adjacency.
inline nnro::BuildGraph graph_from_edges(uint32_t n,
                                         const std::vector<std::pair<uint32_t, uint32_t>>& edges,
                                         uint32_t max_links = 0) {
  std::vector<std::vector<uint32_t>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return graph_from_adjacency(std::move(adj), max_links);
}

inline nnro::VectorDataset random_dataset(std::mt19937_64& rng, uint32_t n, uint32_t dim) {
  std::uniform_real_distribution<float> u(0.f, 1.f);
  std::vector<float> values(static_cast<size_t>(n) * dim);
  for (float& v : values) v = u(rng);
  return nnro::VectorDataset(dim, std::move(values));
}

// Connected undirected graph: random spanning tree plus extra random edges.
inline nnro::BuildGraph random_connected_graph(std::mt19937_64& rng, uint32_t n,
                                               uint32_t extra_edges) {
  std::vector<std::pair<uint32_t, uint32_t>> edges;
  for (uint32_t v = 1; v < n; ++v) {
    const uint32_t parent = static_cast<uint32_t>(rng() % v);
    edges.emplace_back(parent, v);
  }
  for (uint32_t e = 0; e < extra_edges; ++e) {
    const uint32_t u = static_cast<uint32_t>(rng() % n);
    const uint32_t v = static_cast<uint32_t>(rng() % n);
    if (u != v) edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  return graph_from_edges(n, edges);
}

// Directed graph with random out-neighbors (no self loops, deduplicated).
inline nnro::BuildGraph random_directed_graph(std::mt19937_64& rng, uint32_t n,
                                              uint32_t max_out) {
  std::vector<std::vector<uint32_t>> adj(n);
  for (uint32_t v = 0; v < n && n > 1; ++v) {
    const uint32_t want = static_cast<uint32_t>(rng() % (max_out + 1));
    std::set<uint32_t> out;
    while (out.size() < want && out.size() < n - 1)
      out.insert(static_cast<uint32_t>(rng() % n));
    out.erase(v);
    adj[v].assign(out.begin(), out.end());
  }
  return graph_from_adjacency(std::move(adj), std::max(1u, max_out));
}

// Symmetrized k-nearest-neighbor graph over random points.
inline nnro::BuildGraph random_knn_graph(std::mt19937_64& rng, uint32_t n, uint32_t k,
                                         uint32_t dim) {
  const nnro::VectorDataset pts = random_dataset(rng, n, dim);
  std::vector<std::pair<uint32_t, uint32_t>> edges;
  for (uint32_t v = 0; v < n; ++v) {
    std::vector<std::pair<float, uint32_t>> all;
    for (uint32_t u = 0; u < n; ++u)
      if (u != v) all.emplace_back(nnro::l2_sq(pts.vec(v), pts.vec(u), dim), u);
    std::sort(all.begin(), all.end());
    for (uint32_t i = 0; i < std::min<uint32_t>(k, static_cast<uint32_t>(all.size())); ++i)
      edges.emplace_back(std::min(v, all[i].second), std::max(v, all[i].second));
  }
  return graph_from_edges(n, edges);
}

inline nnro::Ordering random_ordering(std::mt19937_64& rng, uint32_t n) {
  std::vector<uint32_t> fwd(n);
  for (uint32_t i = 0; i < n; ++i) fwd[i] = i;
  std::shuffle(fwd.begin(), fwd.end(), rng);
  return nnro::Ordering::from_forward(std::move(fwd));
}

// ---- independent oracles (direct enumeration, no shared logic with src/) ----

inline std::vector<std::set<uint32_t>> neighbor_sets(const nnro::BuildGraph& sym) {
  std::vector<std::set<uint32_t>> nb(sym.size());
  for (uint32_t u = 0; u < sym.size(); ++u)
    for (uint32_t v : sym.links_at(u, 0)) nb[u].insert(v);
  return nb;
}

// Sum over unordered pairs within the window of: 1 for an edge, plus the
// number of common neighbors.
inline uint64_t oracle_gorder_score(const nnro::BuildGraph& sym, const nnro::Ordering& p,
                                    uint32_t window) {
  const auto nb = neighbor_sets(sym);
  const uint32_t n = sym.size();
  uint64_t total = 0;
  for (uint32_t u = 0; u < n; ++u) {
    for (uint32_t v = u + 1; v < n; ++v) {
      const int64_t gap = static_cast<int64_t>(p.forward[u]) - static_cast<int64_t>(p.forward[v]);
      if (gap >= static_cast<int64_t>(window) || -gap >= static_cast<int64_t>(window)) continue;
      uint64_t s = nb[u].count(v) ? 1 : 0;
      for (uint32_t x : nb[u]) s += nb[v].count(x);
      total += s;
    }
  }
  return total;
}

inline uint32_t oracle_bandwidth(const nnro::BuildGraph& sym, const nnro::Ordering& p) {
  uint32_t best = 0;
  for (uint32_t u = 0; u < sym.size(); ++u)
    for (uint32_t v : sym.links_at(u, 0))
      if (v > u) {
        const int64_t gap =
            static_cast<int64_t>(p.forward[u]) - static_cast<int64_t>(p.forward[v]);
        best = std::max<uint32_t>(best, static_cast<uint32_t>(gap < 0 ? -gap : gap));
      }
  return best;
}

inline uint64_t oracle_linear_cost(const nnro::BuildGraph& sym, const nnro::Ordering& p) {
  uint64_t total = 0;
  for (uint32_t u = 0; u < sym.size(); ++u)
    for (uint32_t v : sym.links_at(u, 0))
      if (v > u) {
        const int64_t gap =
            static_cast<int64_t>(p.forward[u]) - static_cast<int64_t>(p.forward[v]);
        total += static_cast<uint64_t>(gap < 0 ? -gap : gap);
      }
  return total;
}

inline double oracle_log_cost(const nnro::BuildGraph& sym, const nnro::Ordering& p) {
  double total = 0;
  for (uint32_t u = 0; u < sym.size(); ++u)
    for (uint32_t v : sym.links_at(u, 0))
      if (v > u) {
        const int64_t gap =
            static_cast<int64_t>(p.forward[u]) - static_cast<int64_t>(p.forward[v]);
        total += std::log2(static_cast<double>(gap < 0 ? -gap : gap));
      }
  return total;
}

// Exact neighbors by full sort over (distance, id).
inline std::vector<uint32_t> oracle_knn(const nnro::VectorDataset& data, const float* q,
                                        uint32_t k) {
  std::vector<std::pair<float, uint32_t>> all(data.size());
  for (uint32_t i = 0; i < data.size(); ++i)
    all[i] = {nnro::l2_sq(q, data.vec(i), data.dim()), i};
  std::sort(all.begin(), all.end());
  std::vector<uint32_t> ids;
  for (uint32_t i = 0; i < std::min<uint32_t>(k, data.size()); ++i) ids.push_back(all[i].second);
  return ids;
}

}  // namespace helpers
