#include "nnro/reorder.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace nnro {
namespace {

Ordering from_sequence(const std::vector<uint32_t>& seq) {
  Ordering p;
  p.inverse = seq;
  p.forward.resize(seq.size());
  for (uint32_t pos = 0; pos < seq.size(); ++pos) p.forward[seq[pos]] = pos;
  return p;
}

void require_matching(const BuildGraph& g, const Ordering& p, const char* who) {
  if (auto violation = validate_ordering(p, g.size()))
    throw std::invalid_argument(std::string(who) + ": " + violation->describe());
}

uint64_t sorted_intersection_count(const std::vector<uint32_t>& a,
                                   const std::vector<uint32_t>& b) {
  uint64_t count = 0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

}  // namespace

Ordering gorder(const BuildGraph& sym, uint32_t window) {
  if (window == 0) throw std::invalid_argument("gorder: window must be >= 1");
  const uint32_t n = sym.size();
  if (n == 0) return Ordering::identity(0);

  const std::vector<uint32_t> deg = out_degrees(sym);
  std::vector<uint8_t> placed(n, 0);
  std::vector<int64_t> key(n, 0);

  struct Entry {
    int64_t key;
    uint32_t id;
  };
  struct Less {
    bool operator()(const Entry& a, const Entry& b) const {
      return a.key < b.key || (a.key == b.key && a.id > b.id);
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, Less> heap;
  const size_t compact_cap = std::max<size_t>(4 * static_cast<size_t>(n), size_t{1} << 20);

  // Lazy heap: every key change pushes a fresh snapshot, pops discard entries
  // that no longer match the authoritative key. Each change is +-1, so the
  // current value of any positive key always has a live snapshot.
  auto bump = [&](uint32_t v, int64_t delta) {
    if (placed[v]) return;
    key[v] += delta;
    if (key[v] > 0) heap.push({key[v], v});
  };
  auto enter_window = [&](uint32_t u) {
    for (uint32_t x : sym.nodes[u].links[0]) {
      bump(x, +1);  // shares the edge {u, x}
      for (uint32_t y : sym.nodes[x].links[0])
        if (y != u) bump(y, +1);  // shares the common neighbor x with u
    }
  };
  auto leave_window = [&](uint32_t u) {
    for (uint32_t x : sym.nodes[u].links[0]) {
      bump(x, -1);
      for (uint32_t y : sym.nodes[x].links[0])
        if (y != u) bump(y, -1);
    }
  };
  auto compact = [&]() {
    if (heap.size() <= compact_cap) return;
    std::priority_queue<Entry, std::vector<Entry>, Less> fresh;
    for (uint32_t v = 0; v < n; ++v)
      if (!placed[v] && key[v] > 0) fresh.push({key[v], v});
    heap = std::move(fresh);
  };

  std::vector<uint32_t> order;
  order.reserve(n);
  std::deque<uint32_t> win;
  auto place = [&](uint32_t v) {
    placed[v] = 1;
    order.push_back(v);
    win.push_back(v);
    enter_window(v);
    if (win.size() > window) {
      leave_window(win.front());
      win.pop_front();
    }
    compact();
  };
  auto max_degree_unplaced = [&]() {
    uint32_t best = kInvalidId;
    for (uint32_t v = 0; v < n; ++v)
      if (!placed[v] && (best == kInvalidId || deg[v] > deg[best])) best = v;
    return best;
  };

  place(max_degree_unplaced());
  while (order.size() < n) {
    uint32_t next = kInvalidId;
    while (!heap.empty()) {
      Entry top = heap.top();
      heap.pop();
      if (placed[top.id] || key[top.id] != top.key) continue;
      next = top.id;
      break;
    }
    // No unplaced node has window affinity: restart at the max-degree one.
    if (next == kInvalidId) next = max_degree_unplaced();
    place(next);
  }
  return from_sequence(order);
}

Ordering rcm(const BuildGraph& sym) {
  const uint32_t n = sym.size();
  const std::vector<uint32_t> deg = out_degrees(sym);
  std::vector<uint8_t> discovered(n, 0);
  std::vector<uint8_t> visited(n, 0);
  std::vector<uint32_t> visit_order;
  visit_order.reserve(n);
  std::vector<uint32_t> component, bfs, nbrs;

  for (uint32_t scan = 0; scan < n; ++scan) {
    if (discovered[scan]) continue;
    // Collect the component (scan order makes this the minimum-id component
    // not yet handled), then restart breadth-first from its min-degree node.
    component.assign(1, scan);
    discovered[scan] = 1;
    for (size_t head = 0; head < component.size(); ++head)
      for (uint32_t v : sym.nodes[component[head]].links[0])
        if (!discovered[v]) {
          discovered[v] = 1;
          component.push_back(v);
        }

    uint32_t start = component[0];
    for (uint32_t v : component)
      if (deg[v] < deg[start] || (deg[v] == deg[start] && v < start)) start = v;

    bfs.assign(1, start);
    visited[start] = 1;
    for (size_t head = 0; head < bfs.size(); ++head) {
      uint32_t u = bfs[head];
      visit_order.push_back(u);
      nbrs = sym.nodes[u].links[0];
      std::sort(nbrs.begin(), nbrs.end(), [&](uint32_t a, uint32_t b) {
        return deg[a] < deg[b] || (deg[a] == deg[b] && a < b);
      });
      for (uint32_t v : nbrs)
        if (!visited[v]) {
          visited[v] = 1;
          bfs.push_back(v);
        }
    }
  }

  std::vector<uint32_t> fwd(n);
  for (uint32_t i = 0; i < n; ++i) fwd[visit_order[i]] = n - 1 - i;
  Ordering p;
  p.forward = std::move(fwd);
  p.inverse.assign(visit_order.rbegin(), visit_order.rend());
  return p;
}

Ordering degree_sort(const BuildGraph& g, DegreeDirection direction) {
  const std::vector<uint32_t> deg =
      direction == DegreeDirection::kOut ? out_degrees(g) : in_degrees(g);
  std::vector<uint32_t> seq(g.size());
  std::iota(seq.begin(), seq.end(), 0u);
  std::sort(seq.begin(), seq.end(), [&](uint32_t a, uint32_t b) {
    return deg[a] > deg[b] || (deg[a] == deg[b] && a < b);
  });
  return from_sequence(seq);
}

namespace {

Ordering hub_split(const BuildGraph& g, bool sort_hubs) {
  const std::vector<uint32_t> deg = in_degrees(g);
  const uint32_t n = g.size();
  double mean = 0.0;
  for (uint32_t d : deg) mean += d;
  if (n > 0) mean /= n;

  std::vector<uint32_t> seq;
  seq.reserve(n);
  for (uint32_t v = 0; v < n; ++v)
    if (deg[v] > mean) seq.push_back(v);
  if (sort_hubs)
    std::sort(seq.begin(), seq.end(), [&](uint32_t a, uint32_t b) {
      return deg[a] > deg[b] || (deg[a] == deg[b] && a < b);
    });
  for (uint32_t v = 0; v < n; ++v)
    if (!(deg[v] > mean)) seq.push_back(v);
  return from_sequence(seq);
}

}  // namespace

Ordering hub_sort(const BuildGraph& g) { return hub_split(g, true); }

Ordering hub_cluster(const BuildGraph& g) { return hub_split(g, false); }

Ordering dbg(const BuildGraph& g, uint32_t groups) {
  if (groups == 0) throw std::invalid_argument("dbg: groups must be >= 1");
  const uint32_t n = g.size();
  if (n == 0) return Ordering::identity(0);
  const std::vector<uint32_t> deg = in_degrees(g);

  std::vector<uint32_t> sorted_desc = deg;
  std::sort(sorted_desc.begin(), sorted_desc.end(), std::greater<uint32_t>());

  // Lower boundary of group i (1-based, group 1 holds the highest degrees):
  // the nearest-rank value at position ceil(i * n / groups) of the
  // descending degree sequence.
  std::vector<uint32_t> boundary(groups);
  for (uint64_t i = 1; i <= groups; ++i) {
    uint64_t rank = (i * n + groups - 1) / groups;
    boundary[i - 1] = sorted_desc[rank - 1];
  }

  std::vector<std::vector<uint32_t>> buckets(groups);
  for (uint32_t v = 0; v < n; ++v) {
    uint32_t gi = groups - 1;
    for (uint32_t i = 0; i < groups; ++i)
      if (boundary[i] <= deg[v]) {
        gi = i;
        break;
      }
    buckets[gi].push_back(v);
  }

  std::vector<uint32_t> seq;
  seq.reserve(n);
  for (auto& bucket : buckets) seq.insert(seq.end(), bucket.begin(), bucket.end());
  return from_sequence(seq);
}

Ordering make_ordering(const BuildGraph& base, const ReorderSpec& spec) {
  switch (spec.algorithm) {
    case ReorderAlgorithm::kGorder:
      return gorder(symmetrize(base), spec.window);
    case ReorderAlgorithm::kRcm:
      return rcm(symmetrize(base));
    case ReorderAlgorithm::kDegreeSort:
      return degree_sort(base, spec.direction);
    case ReorderAlgorithm::kHubSort:
      return hub_sort(base);
    case ReorderAlgorithm::kHubCluster:
      return hub_cluster(base);
    case ReorderAlgorithm::kDbg:
      return dbg(base, spec.groups);
  }
  throw std::invalid_argument("make_ordering: unknown algorithm");
}

uint64_t gorder_score(const BuildGraph& sym, const Ordering& p, uint32_t window) {
  if (window == 0) throw std::invalid_argument("gorder_score: window must be >= 1");
  require_matching(sym, p, "gorder_score");
  const uint32_t n = sym.size();
  uint64_t total = 0;
  for (uint32_t i = 0; i < n; ++i) {
    uint32_t u = p.inverse[i];
    const auto& au = sym.nodes[u].links[0];
    const uint64_t stop = std::min<uint64_t>(static_cast<uint64_t>(i) + window, n);
    for (uint64_t j = i + 1; j < stop; ++j) {
      uint32_t v = p.inverse[j];
      const auto& av = sym.nodes[v].links[0];
      if (std::binary_search(au.begin(), au.end(), v)) ++total;
      total += sorted_intersection_count(au, av);
    }
  }
  return total;
}

uint32_t bandwidth(const BuildGraph& sym, const Ordering& p) {
  require_matching(sym, p, "bandwidth");
  uint32_t best = 0;
  for (uint32_t u = 0; u < sym.size(); ++u)
    for (uint32_t v : sym.nodes[u].links[0])
      if (v > u) {
        uint32_t a = p.forward[u], b = p.forward[v];
        best = std::max(best, a > b ? a - b : b - a);
      }
  return best;
}

uint64_t linear_arrangement_cost(const BuildGraph& sym, const Ordering& p) {
  require_matching(sym, p, "linear_arrangement_cost");
  uint64_t total = 0;
  for (uint32_t u = 0; u < sym.size(); ++u)
    for (uint32_t v : sym.nodes[u].links[0])
      if (v > u) {
        uint32_t a = p.forward[u], b = p.forward[v];
        total += a > b ? a - b : b - a;
      }
  return total;
}

double log_arrangement_cost(const BuildGraph& sym, const Ordering& p) {
  require_matching(sym, p, "log_arrangement_cost");
  double total = 0.0;
  for (uint32_t u = 0; u < sym.size(); ++u)
    for (uint32_t v : sym.nodes[u].links[0])
      if (v > u) {
        uint32_t a = p.forward[u], b = p.forward[v];
        total += std::log2(static_cast<double>(a > b ? a - b : b - a));
      }
  return total;
}

OrderingScore score_ordering(const BuildGraph& sym, const Ordering& p, uint32_t window) {
  return {gorder_score(sym, p, window), bandwidth(sym, p), linear_arrangement_cost(sym, p),
          log_arrangement_cost(sym, p)};
}

const char* to_string(ReorderAlgorithm a) {
  switch (a) {
    case ReorderAlgorithm::kGorder: return "gorder";
    case ReorderAlgorithm::kRcm: return "rcm";
    case ReorderAlgorithm::kDegreeSort: return "degree-sort";
    case ReorderAlgorithm::kHubSort: return "hub-sort";
    case ReorderAlgorithm::kHubCluster: return "hub-cluster";
    case ReorderAlgorithm::kDbg: return "dbg";
  }
  return "unknown";
}

std::optional<ReorderSpec> parse_reorder_spec(const std::string& token) {
  ReorderSpec spec;
  if (token == "gorder") {
    spec.algorithm = ReorderAlgorithm::kGorder;
  } else if (token == "rcm") {
    spec.algorithm = ReorderAlgorithm::kRcm;
  } else if (token == "degree-sort" || token == "degree-sort-in") {
    spec.algorithm = ReorderAlgorithm::kDegreeSort;
    spec.direction = DegreeDirection::kIn;
  } else if (token == "degree-sort-out") {
    spec.algorithm = ReorderAlgorithm::kDegreeSort;
    spec.direction = DegreeDirection::kOut;
  } else if (token == "hub-sort") {
    spec.algorithm = ReorderAlgorithm::kHubSort;
  } else if (token == "hub-cluster") {
    spec.algorithm = ReorderAlgorithm::kHubCluster;
  } else if (token == "dbg") {
    spec.algorithm = ReorderAlgorithm::kDbg;
  } else {
    return std::nullopt;
  }
  return spec;
}

}  // namespace nnro
