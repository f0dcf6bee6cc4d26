#include <doctest.h>

#include <random>
#include <stdexcept>

#include "oracle/oracle.hpp"

using namespace oracle;

namespace {

SmallGraph complete(std::size_t n) {
  SmallGraph g(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) g.connect(a, b);
  return g;
}

// Exhaustive subset scan, for graphs small enough to enumerate.
std::size_t max_clique_by_subsets(const SmallGraph& g) {
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1U << g.size()); ++mask) {
    bool ok = true;
    for (std::size_t a = 0; a < g.size() && ok; ++a)
      for (std::size_t b = a + 1; b < g.size() && ok; ++b)
        if ((mask >> a & 1U) && (mask >> b & 1U) && !g.adjacent(a, b)) ok = false;
    if (ok) best = std::max<std::size_t>(best, static_cast<std::size_t>(__builtin_popcount(mask)));
  }
  return best;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("maximum clique") {
  CHECK(max_clique_exact(complete(4)).size() == 4);
  SmallGraph cycle(5);
  for (std::size_t v = 0; v < 5; ++v) cycle.connect(v, (v + 1) % 5);
  CHECK(max_clique_exact(cycle).size() == 2);
  CHECK(max_clique_exact(SmallGraph(0)).empty());
  CHECK_THROWS_AS(SmallGraph(21), std::length_error);

  std::mt19937 gen(1);
  for (int trial = 0; trial < 60; ++trial) {
    SmallGraph g(12);
    for (std::size_t a = 0; a < 12; ++a)
      for (std::size_t b = a + 1; b < 12; ++b)
        if (gen() % 2) g.connect(a, b);
    const auto c = max_clique_exact(g);
    for (std::size_t x : c)
      for (std::size_t y : c)
        if (x != y) REQUIRE(g.adjacent(x, y));
    REQUIRE(c.size() == max_clique_by_subsets(g));
  }
}

TEST_CASE("minimum clique cover") {
  CHECK(min_clique_cover_exact(complete(6)) == 1);
  CHECK(min_clique_cover_exact(SmallGraph(5)) == 5);
  SmallGraph path(4);
  path.connect(0, 1);
  path.connect(1, 2);
  path.connect(2, 3);
  CHECK(min_clique_cover_exact(path) == 2);
  SmallGraph cycle(5);
  for (std::size_t v = 0; v < 5; ++v) cycle.connect(v, (v + 1) % 5);
  CHECK(min_clique_cover_exact(cycle) == 3);
  CHECK_THROWS_AS(min_clique_cover_exact(SmallGraph(11)), std::length_error);
}

TEST_CASE("instant decodability") {
  const std::vector<bool> has{true, true, false, false};
  CHECK_FALSE(verify_instant_decodability({0, 1}, has).has_value());
  CHECK(verify_instant_decodability({0, 2}, has) == std::size_t{2});
  CHECK_FALSE(verify_instant_decodability({2, 3}, has).has_value());
}

TEST_CASE("schoolbook arithmetic") {
  CHECK(poly_mul_mod(0x57, 0x83, 0x11B, 8) == 0xC1);
  CHECK(poly_mul_mod(0x57, 0x13, 0x11B, 8) == 0xFE);
  const Field f5{5, 0, 0};
  CHECK(f5.mul(3, 4) == 2);
  CHECK(rank(f5, 2, 2, {1, 2, 2, 4}) == 1);
  CHECK(rank(f5, 2, 2, {1, 2, 2, 3}) == 2);
  const std::vector<std::uint32_t> id{1, 0, 0, 1};
  CHECK(exhaustive_decode_check(f5, 2, id, {{1, 2}, {3, 4}}, {{1, 2}, {3, 4}}));
  CHECK_FALSE(exhaustive_decode_check(f5, 2, id, {{1, 2}, {3, 0}}, {{1, 2}, {3, 4}}));
}

}
