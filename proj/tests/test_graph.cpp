#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "nnro/graph.hpp"

using namespace nnro;

TEST_CASE("identity ordering maps every position to itself") {
  const Ordering p = Ordering::identity(5);
  REQUIRE(p.size() == 5);
  for (uint32_t i = 0; i < 5; ++i) {
    CHECK(p.forward[i] == i);
    CHECK(p.inverse[i] == i);
  }
  CHECK(p.is_identity());
  CHECK_FALSE(Ordering::from_forward({1, 0, 2}).is_identity());
}

TEST_CASE("from_forward builds the inverse side") {
  const Ordering p = Ordering::from_forward({2, 0, 3, 1});
  CHECK(p.inverse == std::vector<uint32_t>{1, 3, 0, 2});
  for (uint32_t i = 0; i < 4; ++i) CHECK(p.inverse[p.forward[i]] == i);
}

TEST_CASE("from_forward rejects non-bijections") {
  CHECK_THROWS_AS(Ordering::from_forward({0, 5, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Ordering::from_forward({0, 1, 1}), std::invalid_argument);
}

TEST_CASE("composition applies the first ordering, then the second") {
  const Ordering p1 = Ordering::from_forward({1, 2, 0});
  const Ordering p2 = Ordering::from_forward({0, 2, 1});
  const Ordering both = compose(p1, p2);
  for (uint32_t x = 0; x < 3; ++x) CHECK(both.forward[x] == p2.forward[p1.forward[x]]);
  CHECK(both.forward == std::vector<uint32_t>{2, 1, 0});
  CHECK(compose(p1, Ordering::identity(3)) == p1);
  CHECK(compose(Ordering::identity(3), p1) == p1);
}

TEST_CASE("validate_ordering identifies the first violation") {
  CHECK_FALSE(validate_ordering(Ordering::from_forward({2, 0, 1}), 3).has_value());

  SUBCASE("length mismatch") {
    const auto v = validate_ordering(Ordering::identity(3), 4);
    REQUIRE(v.has_value());
    CHECK(v->kind == OrderingViolation::Kind::kLengthMismatch);
  }
  SUBCASE("slot out of range") {
    Ordering p = Ordering::identity(3);
    p.forward[1] = 7;
    const auto v = validate_ordering(p, 3);
    REQUIRE(v.has_value());
    CHECK(v->kind == OrderingViolation::Kind::kSlotOutOfRange);
    CHECK(v->index == 1);
    CHECK(v->value == 7);
  }
  SUBCASE("duplicate slot") {
    Ordering p = Ordering::identity(3);
    p.forward = {0, 2, 2};
    p.inverse = {0, 0, 2};
    const auto v = validate_ordering(p, 3);
    REQUIRE(v.has_value());
    CHECK(v->kind == OrderingViolation::Kind::kDuplicateSlot);
    CHECK(v->index == 2);
  }
  SUBCASE("inconsistent inverse") {
    Ordering p = Ordering::identity(3);
    std::swap(p.inverse[0], p.inverse[1]);
    const auto v = validate_ordering(p, 3);
    REQUIRE(v.has_value());
    CHECK(v->kind == OrderingViolation::Kind::kInverseMismatch);
  }
  SUBCASE("violations carry a human-readable description") {
    const auto v = validate_ordering(Ordering::identity(2), 5);
    REQUIRE(v.has_value());
    CHECK_FALSE(v->describe().empty());
  }
}

TEST_CASE("directed degree vectors count the base layer only") {
  const BuildGraph g = helpers::graph_from_adjacency({{1, 2}, {2}, {}, {2}});
  CHECK(out_degrees(g) == std::vector<uint32_t>{2, 1, 0, 1});
  CHECK(in_degrees(g) == std::vector<uint32_t>{0, 1, 3, 0});
}

TEST_CASE("degree statistics match hand-computed moments") {
  const BuildGraph g = helpers::graph_from_adjacency({{1, 2}, {2}, {}, {2}});

  const DegreeStats out = degree_stats(g, DegreeDirection::kOut);
  CHECK(out.mean == doctest::Approx(1.0));
  CHECK(out.stddev == doctest::Approx(std::sqrt(0.5)));
  CHECK(out.min == 0);
  CHECK(out.max == 2);
  CHECK(out.histogram == std::vector<uint64_t>{1, 2, 1});
  CHECK(out.direction == DegreeDirection::kOut);

  const DegreeStats in = degree_stats(g, DegreeDirection::kIn);
  CHECK(in.mean == doctest::Approx(1.0));
  CHECK(in.max == 3);
  CHECK(in.histogram == std::vector<uint64_t>{2, 1, 0, 1});
}

TEST_CASE("symmetrize yields a sorted undirected view of the base layer") {
  BuildGraph g = helpers::graph_from_adjacency({{1, 2}, {2}, {}, {2}});
  g.nodes[0].level = 1;
  g.nodes[0].links.push_back({1});
  g.max_level = 1;

  const BuildGraph sym = symmetrize(g);
  REQUIRE(sym.size() == 4);
  CHECK(sym.max_level == 0);
  CHECK(sym.links_at(0, 0) == std::vector<uint32_t>{1, 2});
  CHECK(sym.links_at(1, 0) == std::vector<uint32_t>{0, 2});
  CHECK(sym.links_at(2, 0) == std::vector<uint32_t>{0, 1, 3});
  CHECK(sym.links_at(3, 0) == std::vector<uint32_t>{2});
  for (uint32_t u = 0; u < sym.size(); ++u) CHECK(sym.nodes[u].links.size() == 1);

  SUBCASE("idempotent on an already symmetric graph") {
    const BuildGraph twice = symmetrize(sym);
    for (uint32_t u = 0; u < sym.size(); ++u)
      CHECK(twice.links_at(u, 0) == sym.links_at(u, 0));
  }
}

TEST_CASE("random orderings validate and compose with their inverse to identity") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const uint32_t n = 1 + static_cast<uint32_t>(rng() % 40);
    const Ordering p = helpers::random_ordering(rng, n);
    CHECK_FALSE(validate_ordering(p, n).has_value());
    const Ordering undo = Ordering::from_forward(p.inverse);
    CHECK(compose(p, undo).is_identity());
  }
}
