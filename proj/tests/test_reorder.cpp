#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "nnro/reorder.hpp"

using namespace nnro;

namespace {

// K_{1,3}: center 0, leaves 1..3
BuildGraph star4() { return helpers::graph_from_edges(4, {{0, 1}, {0, 2}, {0, 3}}); }
BuildGraph triangle() { return helpers::graph_from_edges(3, {{0, 1}, {1, 2}, {0, 2}}); }
BuildGraph path(uint32_t n) {
  std::vector<std::pair<uint32_t, uint32_t>> edges;
  for (uint32_t v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return helpers::graph_from_edges(n, edges);
}

template <typename Score>
auto best_over_all_orderings(uint32_t n, Score score) {
  std::vector<uint32_t> fwd(n);
  std::iota(fwd.begin(), fwd.end(), 0u);
  auto best = score(Ordering::from_forward(fwd));
  while (std::next_permutation(fwd.begin(), fwd.end()))
    best = std::max(best, score(Ordering::from_forward(fwd)));
  return best;
}

template <typename Score>
auto least_over_all_orderings(uint32_t n, Score score) {
  std::vector<uint32_t> fwd(n);
  std::iota(fwd.begin(), fwd.end(), 0u);
  auto best = score(Ordering::from_forward(fwd));
  while (std::next_permutation(fwd.begin(), fwd.end()))
    best = std::min(best, score(Ordering::from_forward(fwd)));
  return best;
}

}  // namespace

TEST_CASE("window score counts edges plus shared neighbors inside the window") {
  const BuildGraph tri = triangle();
  // by symmetry every labeling of a triangle scores the same
  std::vector<uint32_t> fwd = {0, 1, 2};
  do {
    CHECK(gorder_score(tri, Ordering::from_forward(fwd), 2) == 4);
  } while (std::next_permutation(fwd.begin(), fwd.end()));

  const BuildGraph p3 = path(3);
  fwd = {0, 1, 2};
  do {
    CHECK(gorder_score(p3, Ordering::from_forward(fwd), 2) == 2);
  } while (std::next_permutation(fwd.begin(), fwd.end()));

  const BuildGraph star = star4();
  const uint64_t best = best_over_all_orderings(
      4, [&](const Ordering& p) { return gorder_score(star, p, 2); });
  CHECK(best == 3);

  CHECK_THROWS_AS(gorder_score(star, Ordering::identity(4), 0), std::invalid_argument);
  CHECK_THROWS_AS(gorder_score(star, Ordering::identity(3), 2), std::invalid_argument);
}

TEST_CASE("slot-gap objectives match their closed forms on small graphs") {
  const BuildGraph p4 = path(4);
  CHECK(bandwidth(p4, Ordering::identity(4)) == 1);
  CHECK(linear_arrangement_cost(p4, Ordering::identity(4)) == 3);
  CHECK(log_arrangement_cost(p4, Ordering::identity(4)) == 0.0);

  const BuildGraph tri = triangle();
  std::vector<uint32_t> fwd = {0, 1, 2};
  do {
    const Ordering p = Ordering::from_forward(fwd);
    CHECK(linear_arrangement_cost(tri, p) == 4);
    CHECK(log_arrangement_cost(tri, p) == doctest::Approx(1.0));
    CHECK(bandwidth(tri, p) == 2);
  } while (std::next_permutation(fwd.begin(), fwd.end()));

  // complete graphs always stretch one edge across the whole range
  for (uint32_t n : {3u, 5u, 6u}) {
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    for (uint32_t u = 0; u < n; ++u)
      for (uint32_t v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    const BuildGraph kn = helpers::graph_from_edges(n, edges);
    std::mt19937_64 rng(n);
    CHECK(bandwidth(kn, helpers::random_ordering(rng, n)) == n - 1);
  }

  const BuildGraph star = star4();
  CHECK(least_over_all_orderings(4, [&](const Ordering& p) { return bandwidth(star, p); }) == 2);
  CHECK(least_over_all_orderings(
            4, [&](const Ordering& p) { return linear_arrangement_cost(star, p); }) == 4);
  // center in a middle slot: gaps 1, 1, 2
  const Ordering center_middle = Ordering::from_forward({1, 0, 2, 3});
  CHECK(log_arrangement_cost(star, center_middle) == doctest::Approx(1.0));

  // empty edge set
  const BuildGraph isolated = helpers::graph_from_edges(3, {});
  CHECK(bandwidth(isolated, Ordering::identity(3)) == 0);
  CHECK(linear_arrangement_cost(isolated, Ordering::identity(3)) == 0);
}

TEST_CASE("objective evaluators agree with pair enumeration on small graphs") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const uint32_t n = 1 + static_cast<uint32_t>(rng() % 8);
    const BuildGraph g = helpers::random_connected_graph(rng, n, n);
    const Ordering p = helpers::random_ordering(rng, n);
    const uint32_t w = 1 + static_cast<uint32_t>(rng() % 4);
    CHECK(gorder_score(g, p, w) == helpers::oracle_gorder_score(g, p, w));
    CHECK(bandwidth(g, p) == helpers::oracle_bandwidth(g, p));
    CHECK(linear_arrangement_cost(g, p) == helpers::oracle_linear_cost(g, p));
    CHECK(log_arrangement_cost(g, p) ==
          doctest::Approx(helpers::oracle_log_cost(g, p)).epsilon(1e-12));
    const OrderingScore s = score_ordering(g, p, w);
    CHECK(s.gorder == gorder_score(g, p, w));
    CHECK(s.bandwidth == bandwidth(g, p));
    CHECK(s.linear == linear_arrangement_cost(g, p));
    CHECK(s.log2 == log_arrangement_cost(g, p));
  }
}

TEST_CASE("greedy window placement reaches the brute-force optimum on tiny graphs") {
  CHECK(gorder(helpers::graph_from_edges(1, {}), 3).is_identity());

  const BuildGraph tri = triangle();
  CHECK(gorder_score(tri, gorder(tri, 2), 2) == 4);

  const BuildGraph star = star4();
  CHECK(gorder_score(star, gorder(star, 2), 2) == 3);

  CHECK_THROWS_AS(gorder(star, 0), std::invalid_argument);
}

TEST_CASE("window placement beats identity and random orderings on knn graphs") {
  std::mt19937_64 rng(88);
  for (int trial = 0; trial < 10; ++trial) {
    const BuildGraph g = helpers::random_knn_graph(rng, 120, 6, 4);
    const Ordering placed = gorder(g, 5);
    CHECK_FALSE(validate_ordering(placed, g.size()).has_value());
    CHECK(placed == gorder(g, 5));  // pure function of the inputs

    const uint64_t achieved = gorder_score(g, placed, 5);
    CHECK(achieved >= gorder_score(g, Ordering::identity(g.size()), 5));
    for (int r = 0; r < 30; ++r)
      CHECK(achieved >= gorder_score(g, helpers::random_ordering(rng, g.size()), 5));
  }
}

TEST_CASE("breadth-first relabeling keeps components tight") {
  const BuildGraph p4 = path(4);
  CHECK(bandwidth(p4, rcm(p4)) == 1);

  CHECK(rcm(helpers::graph_from_edges(1, {})).is_identity());

  // two disjoint 3-paths: 0-1-2 and 3-4-5
  const BuildGraph two = helpers::graph_from_edges(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}});
  const Ordering p = rcm(two);
  CHECK(bandwidth(two, p) == 1);
  for (uint32_t comp = 0; comp < 2; ++comp) {
    std::vector<uint32_t> slots;
    for (uint32_t v = 3 * comp; v < 3 * comp + 3; ++v) slots.push_back(p.forward[v]);
    std::sort(slots.begin(), slots.end());
    CHECK(slots[2] - slots[0] == 2);  // contiguous range
  }
}

TEST_CASE("breadth-first relabeling minimizes bandwidth better than chance") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const BuildGraph g = helpers::random_knn_graph(rng, 120, 6, 4);
    const Ordering placed = rcm(g);
    CHECK_FALSE(validate_ordering(placed, g.size()).has_value());
    CHECK(placed == rcm(g));

    const uint32_t achieved = bandwidth(g, placed);
    CHECK(achieved <= bandwidth(g, Ordering::identity(g.size())));
    for (int r = 0; r < 30; ++r)
      CHECK(achieved <= bandwidth(g, helpers::random_ordering(rng, g.size())));
  }
  for (uint32_t n : {2u, 9u, 40u}) {
    const BuildGraph line = path(n);
    CHECK(bandwidth(line, rcm(line)) == 1);
  }
}

TEST_CASE("degree sort ranks by the requested direction, stably") {
  // directed: out-degrees [2,5,5,1,0,0]
  const BuildGraph g = helpers::graph_from_adjacency(
      {{1, 2}, {0, 2, 3, 4, 5}, {0, 1, 3, 4, 5}, {0}, {}, {}});
  const Ordering out = degree_sort(g, DegreeDirection::kOut);
  CHECK(out.inverse == std::vector<uint32_t>{1, 2, 0, 3, 4, 5});

  const auto in_deg = in_degrees(g);
  const Ordering in = degree_sort(g, DegreeDirection::kIn);
  std::vector<uint32_t> expect(g.size());
  std::iota(expect.begin(), expect.end(), 0u);
  std::stable_sort(expect.begin(), expect.end(),
                   [&](uint32_t a, uint32_t b) { return in_deg[a] > in_deg[b]; });
  CHECK(in.inverse == expect);

  // equal degrees collapse to the identity
  const BuildGraph cycle = helpers::graph_from_adjacency({{1}, {2}, {0}});
  CHECK(degree_sort(cycle, DegreeDirection::kOut).is_identity());
  CHECK(degree_sort(cycle, DegreeDirection::kIn).is_identity());

  // star with the center away from id 0: center leads
  const BuildGraph star = helpers::graph_from_edges(4, {{2, 0}, {2, 1}, {2, 3}});
  CHECK(degree_sort(star, DegreeDirection::kOut).inverse ==
        std::vector<uint32_t>{2, 0, 1, 3});

  // slot-order degree sequence is non-increasing
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const BuildGraph r = helpers::random_directed_graph(rng, 40, 6);
    for (DegreeDirection dir : {DegreeDirection::kOut, DegreeDirection::kIn}) {
      const auto deg = dir == DegreeDirection::kOut ? out_degrees(r) : in_degrees(r);
      const Ordering p = degree_sort(r, dir);
      for (uint32_t s = 1; s < r.size(); ++s) CHECK(deg[p.inverse[s - 1]] >= deg[p.inverse[s]]);
    }
  }
}

TEST_CASE("hub split puts above-average in-degree nodes first") {
  // in-degrees [4,2,6,1,2,0,0]: hubs are 0 and 2
  const BuildGraph g = helpers::graph_from_adjacency({{1, 2, 4},
                                                      {0, 2},
                                                      {0},
                                                      {0, 2, 4},
                                                      {2, 3},
                                                      {0, 2},
                                                      {1, 2}});
  REQUIRE(in_degrees(g) == std::vector<uint32_t>{4, 2, 6, 1, 2, 0, 0});
  CHECK(hub_sort(g).inverse == std::vector<uint32_t>{2, 0, 1, 3, 4, 5, 6});
  CHECK(hub_cluster(g).inverse == std::vector<uint32_t>{0, 2, 1, 3, 4, 5, 6});

  // equal degrees: no hubs
  const BuildGraph cycle = helpers::graph_from_adjacency({{1}, {2}, {0}});
  CHECK(hub_sort(cycle).is_identity());
  CHECK(hub_cluster(cycle).is_identity());

  // a single hub makes the variants agree
  const BuildGraph star = helpers::graph_from_edges(4, {{2, 0}, {2, 1}, {2, 3}});
  CHECK(hub_sort(star) == hub_cluster(star));
  CHECK(hub_sort(star).inverse == std::vector<uint32_t>{2, 0, 1, 3});

  // hubs always precede non-hubs; hub block sorted for hub_sort
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    const BuildGraph r = helpers::random_directed_graph(rng, 50, 6);
    const auto deg = in_degrees(r);
    double mean = 0;
    for (uint32_t d : deg) mean += d;
    mean /= r.size();
    for (const Ordering& p : {hub_sort(r), hub_cluster(r)}) {
      uint32_t hubs = 0;
      for (uint32_t d : deg) hubs += d > mean ? 1 : 0;
      for (uint32_t s = 0; s < r.size(); ++s) {
        const bool is_hub = deg[p.inverse[s]] > mean;
        CHECK(is_hub == (s < hubs));
      }
    }
  }
}

TEST_CASE("degree grouping splits at nearest-rank quantiles") {
  // in-degrees [1,1,2,2,3,3,4,4]: with two groups the boundary is the median
  BuildGraph g = helpers::graph_from_adjacency({{}, {}, {}, {}, {}, {}, {}, {}});
  auto add_in_edges = [&](uint32_t target, uint32_t count) {
    for (uint32_t i = 1; i <= count; ++i)
      g.nodes[(target + i) % 8].links[0].push_back(target);
  };
  const std::vector<uint32_t> want = {1, 1, 2, 2, 3, 3, 4, 4};
  for (uint32_t v = 0; v < 8; ++v) add_in_edges(v, want[v]);
  REQUIRE(in_degrees(g) == want);

  CHECK(dbg(g, 2).inverse == std::vector<uint32_t>{4, 5, 6, 7, 0, 1, 2, 3});
  CHECK(dbg(g, 1).is_identity());
  CHECK_THROWS_AS(dbg(g, 0), std::invalid_argument);

  // distinct degrees with one group per node reduce to a full degree sort
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const BuildGraph r = helpers::random_directed_graph(rng, 30, 8);
    const auto deg = in_degrees(r);
    std::set<uint32_t> uniq(deg.begin(), deg.end());
    if (uniq.size() == deg.size())
      CHECK(dbg(r, r.size()) == degree_sort(r, DegreeDirection::kIn));

    // group boundaries never interleave: degree order across groups is
    // non-increasing even though each group keeps original id order
    for (uint32_t groups : {2u, 4u, 8u}) {
      const Ordering p = dbg(r, groups);
      CHECK_FALSE(validate_ordering(p, r.size()).has_value());
      uint32_t prev_min = 0xFFFFFFFFu;
      uint32_t prev_id = 0;
      bool first = true;
      for (uint32_t s = 0; s < r.size(); ++s) {
        const uint32_t v = p.inverse[s];
        if (!first && v < prev_id) {
          // id order reset marks a group boundary: degrees must have dropped
          CHECK(deg[v] <= prev_min);
          prev_min = deg[v];
        } else {
          prev_min = std::min(prev_min, deg[v]);
        }
        prev_id = v;
        first = false;
      }
    }
  }
}

TEST_CASE("every algorithm emits a valid deterministic ordering") {
  std::mt19937_64 rng(18);
  const BuildGraph base = helpers::random_directed_graph(rng, 80, 8);
  for (const char* token : {"gorder", "rcm", "degree-sort", "degree-sort-in", "degree-sort-out",
                            "hub-sort", "hub-cluster", "dbg"}) {
    const auto spec = parse_reorder_spec(token);
    REQUIRE(spec.has_value());
    const Ordering a = make_ordering(base, *spec);
    const Ordering b = make_ordering(base, *spec);
    CHECK_FALSE(validate_ordering(a, base.size()).has_value());
    CHECK(a == b);
  }
  CHECK_FALSE(parse_reorder_spec("sort-of-degree").has_value());
  CHECK(parse_reorder_spec("degree-sort")->direction == DegreeDirection::kIn);
  CHECK(parse_reorder_spec("degree-sort-out")->direction == DegreeDirection::kOut);
  CHECK(std::string(to_string(ReorderAlgorithm::kGorder)) == "gorder");
  CHECK(std::string(to_string(ReorderAlgorithm::kDbg)) == "dbg");
}
