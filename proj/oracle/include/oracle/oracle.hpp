#pragma once

// Brute-force checkers for tests. Nothing here includes or links the
// production library.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace oracle {

/// Up to 20 vertices, adjacency as a symmetric boolean matrix.
class SmallGraph {
 public:
  static constexpr std::size_t kMaxVertices = 20;

  explicit SmallGraph(std::size_t n);

  std::size_t size() const { return n_; }
  void connect(std::size_t a, std::size_t b);
  bool adjacent(std::size_t a, std::size_t b) const { return (rows_[a] >> b) & 1U; }
  std::uint32_t row(std::size_t v) const { return rows_[v]; }

 private:
  std::size_t n_;
  std::vector<std::uint32_t> rows_;
};

/// Bron-Kerbosch with pivoting. Throws std::length_error above 20 vertices.
std::vector<std::size_t> max_clique_exact(const SmallGraph& g);

/// Minimum number of cliques partitioning the vertex set. Throws
/// std::length_error above 10 vertices.
std::size_t min_clique_cover_exact(const SmallGraph& g);

/// The one packet of `combo` missing from `has`, or nullopt when none or
/// several are missing.
std::optional<std::size_t> verify_instant_decodability(const std::vector<std::size_t>& combo,
                                                        const std::vector<bool>& has);

/// Schoolbook field: GF(p) for prime p, or GF(2^m) with reduction
/// polynomial `poly` (including the x^m term).
struct Field {
  std::uint32_t order = 0;
  unsigned degree = 0;     // 0 for prime fields
  std::uint32_t poly = 0;  // binary fields only

  bool binary() const { return degree != 0; }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
};

// Bitwise shift-and-add multiply, reduced by long division.
std::uint32_t poly_mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t poly, unsigned degree);

/// Recomputes A.P row by row and compares with X. Refuses (returns false)
/// above n = 64.
bool exhaustive_decode_check(const Field& f, std::size_t n, const std::vector<std::uint32_t>& a,
                             const std::vector<std::vector<std::uint32_t>>& packets,
                             const std::vector<std::vector<std::uint32_t>>& messages);

/// Rank by Gaussian elimination with Fermat inverses (prime) or search
/// inverses (binary).
std::size_t rank(const Field& f, std::size_t rows, std::size_t cols, std::vector<std::uint32_t> m);

}  // namespace oracle
