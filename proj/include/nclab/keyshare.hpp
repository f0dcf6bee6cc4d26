#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "nclab/galois.hpp"
#include "nclab/rng.hpp"

namespace nclab {

/// A client's private key: a permutation of row positions and a permutation
/// of the nonzero field elements. Positions are 0-based.
struct PermutationPair {
  std::vector<std::uint32_t> positions;  // bijection on {0..n-1}
  std::vector<Symbol> values;            // values[a] for a in 1..q-1; values[0] == 0

  std::size_t map_position(std::size_t y) const { return positions[y]; }
  Symbol map_value(Symbol z) const { return values[z]; }

  bool is_valid(std::size_t n, std::uint32_t q) const;
};

/// The broadcast public sets Y_r (positions) and Z_r (nonzero values). Entry k
/// of one pairs with entry k of the other.
struct PublicKeySets {
  std::vector<std::uint32_t> positions;
  std::vector<Symbol> values;

  std::size_t rate() const { return positions.size(); }
};

PermutationPair gen_permutations(std::size_t n, const GaloisField& field, Rng& rng);

/// Draws a position permutation conditioned on mapping `anchor` to `target`,
/// keeping the value permutation. Marginally still uniform over bijections.
void redraw_positions_anchored(PermutationPair& keys, std::uint32_t anchor, std::uint32_t target, Rng& rng);

// Throws UsageError unless r <= min(n, q-1).
PublicKeySets gen_public_sets(std::size_t n, std::size_t r, const GaloisField& field, Rng& rng);

/// Base-station side: A_i(pi_pos(y_k)) = pi_val(z_k).
std::vector<Symbol> derive_row(const PermutationPair& keys, const PublicKeySets& pub, std::size_t n);

/// Client side: walks positions through the inverse position permutation and
/// looks the preimage up in Y_r. Same result as derive_row for the same keys.
std::vector<Symbol> decrypt_row(const PermutationPair& keys, const PublicKeySets& pub, std::size_t n);

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Average brute-force guesses to recover another client's decoding row:
/// (min{(q-1)^r, (q-1)! n!} + 1) / 2, exact. Defined for q > 2 only.
BigRational brute_force_cost(std::uint64_t q, std::uint64_t r, std::uint64_t n);

}  // namespace nclab
