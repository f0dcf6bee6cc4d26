#include "oracle/oracle.hpp"

#include <bit>
#include <functional>
#include <stdexcept>

namespace oracle {

SmallGraph::SmallGraph(std::size_t n) : n_(n), rows_(n, 0) {
  if (n > kMaxVertices) throw std::length_error("oracle graphs are capped at 20 vertices");
}

void SmallGraph::connect(std::size_t a, std::size_t b) {
  if (a == b) return;
  rows_[a] |= 1U << b;
  rows_[b] |= 1U << a;
}

std::vector<std::size_t> max_clique_exact(const SmallGraph& g) {
  std::uint32_t best = 0;
  // r: current clique, p: candidates, x: excluded.
  std::function<void(std::uint32_t, std::uint32_t, std::uint32_t)> expand = [&](std::uint32_t r, std::uint32_t p,
                                                                                 std::uint32_t x) {
    if (p == 0 && x == 0) {
      if (std::popcount(r) > std::popcount(best)) best = r;
      return;
    }
    if (std::popcount(r) + std::popcount(p) <= std::popcount(best)) return;
    const std::uint32_t px = p | x;
    std::size_t pivot = static_cast<std::size_t>(std::countr_zero(px));
    int pivot_hits = -1;
    for (std::uint32_t rest = px; rest; rest &= rest - 1) {
      const auto u = static_cast<std::size_t>(std::countr_zero(rest));
      const int hits = std::popcount(p & g.row(u));
      if (hits > pivot_hits) {
        pivot_hits = hits;
        pivot = u;
      }
    }
    for (std::uint32_t todo = p & ~g.row(pivot); todo; todo &= todo - 1) {
      const auto v = static_cast<std::size_t>(std::countr_zero(todo));
      const std::uint32_t bit = 1U << v;
      expand(r | bit, p & g.row(v), x & g.row(v));
      p &= ~bit;
      x |= bit;
    }
  };
  const std::uint32_t all = g.size() == 32 ? ~0U : (1U << g.size()) - 1;
  if (g.size() > 0) expand(0, all, 0);
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < g.size(); ++v)
    if ((best >> v) & 1U) out.push_back(v);
  return out;
}

std::size_t min_clique_cover_exact(const SmallGraph& g) {
  if (g.size() > 10) throw std::length_error("clique cover oracle is capped at 10 vertices");
  const std::size_t n = g.size();
  if (n == 0) return 0;
  // Assign vertices in order to an existing block (if adjacent to all of it)
  // or to a new block; prune once the block count reaches the best so far.
  std::vector<std::uint32_t> blocks;
  std::size_t best = n;
  std::function<void(std::size_t)> place = [&](std::size_t v) {
    if (blocks.size() >= best) return;
    if (v == n) {
      best = blocks.size();
      return;
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if ((g.row(v) & blocks[b]) == blocks[b]) {
        blocks[b] |= 1U << v;
        place(v + 1);
        blocks[b] &= ~(1U << v);
      }
    }
    blocks.push_back(1U << v);
    place(v + 1);
    blocks.pop_back();
  };
  place(0);
  return best;
}

std::optional<std::size_t> verify_instant_decodability(const std::vector<std::size_t>& combo,
                                                        const std::vector<bool>& has) {
  std::optional<std::size_t> missing;
  for (std::size_t j : combo) {
    if (j < has.size() && has[j]) continue;
    if (missing) return std::nullopt;
    missing = j;
  }
  return missing;
}

std::uint32_t poly_mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t poly, unsigned degree) {
  std::uint64_t product = 0;
  for (unsigned bit = 0; bit < 32; ++bit)
    if ((b >> bit) & 1U) product ^= static_cast<std::uint64_t>(a) << bit;
  for (int bit = 63; bit >= static_cast<int>(degree); --bit)
    if ((product >> bit) & 1U) product ^= static_cast<std::uint64_t>(poly) << (bit - static_cast<int>(degree));
  return static_cast<std::uint32_t>(product);
}

std::uint32_t Field::add(std::uint32_t a, std::uint32_t b) const {
  if (binary()) return a ^ b;
  return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) + b) % order);
}

std::uint32_t Field::mul(std::uint32_t a, std::uint32_t b) const {
  if (binary()) return poly_mul_mod(a, b, poly, degree);
  return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % order);
}

bool exhaustive_decode_check(const Field& f, std::size_t n, const std::vector<std::uint32_t>& a,
                             const std::vector<std::vector<std::uint32_t>>& packets,
                             const std::vector<std::vector<std::uint32_t>>& messages) {
  if (n > 64 || a.size() != n * n || packets.size() != n || messages.size() != n) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t len = messages[i].size();
    for (std::size_t k = 0; k < len; ++k) {
      std::uint32_t acc = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (packets[j].size() != len) return false;
        acc = f.add(acc, f.mul(a[i * n + j], packets[j][k]));
      }
      if (acc != messages[i][k]) return false;
    }
  }
  return true;
}

namespace {

std::uint32_t inverse(const Field& f, std::uint32_t a) {
  if (!f.binary()) {
    // Fermat: a^(p-2).
    std::uint64_t result = 1, base = a % f.order;
    for (std::uint64_t e = f.order - 2; e; e >>= 1) {
      if (e & 1U) result = result * base % f.order;
      base = base * base % f.order;
    }
    return static_cast<std::uint32_t>(result);
  }
  for (std::uint32_t b = 1; b < f.order; ++b)
    if (f.mul(a, b) == 1) return b;
  throw std::domain_error("no inverse");
}

std::uint32_t negate(const Field& f, std::uint32_t a) { return f.binary() || a == 0 ? a : f.order - a; }

}  // namespace

std::size_t rank(const Field& f, std::size_t rows, std::size_t cols, std::vector<std::uint32_t> m) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && m[pivot * cols + c] == 0) ++pivot;
    if (pivot == rows) continue;
    for (std::size_t k = 0; k < cols; ++k) std::swap(m[r * cols + k], m[pivot * cols + k]);
    const std::uint32_t inv = inverse(f, m[r * cols + c]);
    for (std::size_t k = 0; k < cols; ++k) m[r * cols + k] = f.mul(m[r * cols + k], inv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i * cols + c] == 0) continue;
      const std::uint32_t factor = negate(f, m[i * cols + c]);
      for (std::size_t k = 0; k < cols; ++k) m[i * cols + k] = f.add(m[i * cols + k], f.mul(factor, m[r * cols + k]));
    }
    ++r;
  }
  return r;
}

}  // namespace oracle
