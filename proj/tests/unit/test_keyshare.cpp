#include <doctest.h>

#include <algorithm>
#include <numeric>

#include <gmpxx.h>

#include "nclab/errors.hpp"
#include "nclab/keyshare.hpp"

using namespace nclab;

namespace {

PermutationPair identity_keys(std::size_t n, std::uint32_t q) {
  PermutationPair k;
  k.positions.resize(n);
  std::iota(k.positions.begin(), k.positions.end(), 0U);
  k.values.resize(q);
  std::iota(k.values.begin(), k.values.end(), 0U);
  return k;
}

// Independent big-number evaluation of the brute-force cost with GMP.
mpq_class gmp_cost(unsigned long q, unsigned long r, unsigned long n) {
  mpz_class coeff, fq, fn;
  mpz_ui_pow_ui(coeff.get_mpz_t(), q - 1, r);
  mpz_fac_ui(fq.get_mpz_t(), q - 1);
  mpz_fac_ui(fn.get_mpz_t(), n);
  mpz_class perm = fq * fn;
  mpq_class out(mpz_class(std::min(coeff, perm) + 1), 2);
  out.canonicalize();
  return out;
}

}  // namespace

TEST_SUITE("keyshare") {

TEST_CASE("permutations are bijections") {
  Rng rng(1);
  const GaloisField f(FieldSpec::binary(8));
  const auto k = gen_permutations(6, f, rng);
  auto sorted = k.positions;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<std::uint32_t>{0, 1, 2, 3, 4, 5});
  CHECK(k.is_valid(6, 256));
  CHECK(k.values[0] == 0);

  const auto one = gen_permutations(1, f, rng);
  CHECK(one.positions == std::vector<std::uint32_t>{0});
  const GaloisField f2(FieldSpec::binary(1));
  const auto two = gen_permutations(4, f2, rng);
  CHECK(two.values == std::vector<Symbol>{0, 1});
}

TEST_CASE("public sets") {
  Rng rng(2);
  const GaloisField f5(FieldSpec::prime(5));
  const auto full = gen_public_sets(4, 4, f5, rng);
  auto pos = full.positions;
  auto val = full.values;
  std::sort(pos.begin(), pos.end());
  std::sort(val.begin(), val.end());
  CHECK(pos == std::vector<std::uint32_t>{0, 1, 2, 3});
  CHECK(val == std::vector<Symbol>{1, 2, 3, 4});

  CHECK(gen_public_sets(4, 0, f5, rng).rate() == 0);
  CHECK_THROWS_AS(gen_public_sets(4, 5, f5, rng), UsageError);
  CHECK_THROWS_AS(gen_public_sets(10, 5, f5, rng), UsageError);  // r > q-1

  const GaloisField f(FieldSpec::binary(8));
  for (int k = 0; k < 50; ++k) {
    auto s = gen_public_sets(10, 3, f, rng);
    std::sort(s.positions.begin(), s.positions.end());
    std::sort(s.values.begin(), s.values.end());
    CHECK(std::adjacent_find(s.positions.begin(), s.positions.end()) == s.positions.end());
    CHECK(std::adjacent_find(s.values.begin(), s.values.end()) == s.values.end());
    CHECK(s.values.front() != 0);
  }
}

TEST_CASE("derive_row by hand") {
  const PublicKeySets pub{{0, 2}, {2, 4}};
  auto keys = identity_keys(4, 5);
  CHECK(derive_row(keys, pub, 4) == std::vector<Symbol>{2, 0, 4, 0});
  CHECK(decrypt_row(keys, pub, 4) == std::vector<Symbol>{2, 0, 4, 0});
  std::swap(keys.positions[0], keys.positions[1]);
  CHECK(derive_row(keys, pub, 4) == std::vector<Symbol>{0, 2, 4, 0});
}

TEST_CASE("decrypt matches derive and rows have r distinct nonzeros") {
  Rng rng(3);
  const GaloisField f(FieldSpec::prime(257));
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(30);
    const std::size_t r = 1 + rng.below(n);
    const auto keys = gen_permutations(n, f, rng);
    const auto pub = gen_public_sets(n, r, f, rng);
    const auto row = derive_row(keys, pub, n);
    REQUIRE(row == decrypt_row(keys, pub, n));
    std::vector<Symbol> nz;
    for (Symbol v : row)
      if (v) nz.push_back(v);
    REQUIRE(nz.size() == r);
    std::sort(nz.begin(), nz.end());
    REQUIRE(std::adjacent_find(nz.begin(), nz.end()) == nz.end());
  }
}

TEST_CASE("wrong keys rarely reproduce the row") {
  Rng rng(4);
  const GaloisField f(FieldSpec::prime(257));
  int differ = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto pub = gen_public_sets(10, 3, f, rng);
    const auto mine = gen_permutations(10, f, rng);
    const auto theirs = gen_permutations(10, f, rng);
    if (derive_row(mine, pub, 10) != decrypt_row(theirs, pub, 10)) ++differ;
  }
  CHECK(differ >= 950);
}

TEST_CASE("anchored redraw keeps a bijection and hits the target") {
  Rng rng(5);
  const GaloisField f(FieldSpec::binary(8));
  auto k = gen_permutations(9, f, rng);
  redraw_positions_anchored(k, 4, 7, rng);
  CHECK(k.positions[4] == 7);
  CHECK(k.is_valid(9, 256));
}

TEST_CASE("brute-force cost exact values") {
  CHECK(brute_force_cost(3, 2, 2) == BigRational(5, 2));
  CHECK(brute_force_cost(3, 10, 2) == BigRational(5, 2));
  CHECK(brute_force_cost(5, 3, 3) == BigRational(65, 2));
  CHECK_THROWS_AS(brute_force_cost(2, 1, 4), DomainError);
}

TEST_CASE("brute-force cost agrees with an independent big-number oracle") {
  for (auto [q, r, n] : {std::tuple{257UL, 16UL, 20UL}, std::tuple{257UL, 60UL, 100UL}, std::tuple{7UL, 40UL, 3UL},
                         std::tuple{65521UL, 3UL, 50UL}, std::tuple{17UL, 12UL, 5UL}}) {
    const auto want = gmp_cost(q, r, n);
    const BigRational got = brute_force_cost(q, r, n);
    CHECK(boost::multiprecision::numerator(got).str() == want.get_num().get_str());
    CHECK(boost::multiprecision::denominator(got).str() == want.get_den().get_str());
  }
}

TEST_CASE("brute-force cost grows with r, then flattens") {
  BigRational prev = brute_force_cost(5, 1, 2);
  bool flat = false;
  for (std::uint64_t r = 2; r < 12; ++r) {
    const auto cur = brute_force_cost(5, r, 2);
    CHECK(cur >= prev);
    if (cur == prev) flat = true;
    if (flat) CHECK(cur == prev);
    prev = cur;
  }
  CHECK(flat);
}

}
