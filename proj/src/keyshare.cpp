#include "nclab/keyshare.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>

#include <fmt/format.h>

#include "nclab/errors.hpp"

namespace nclab {

bool PermutationPair::is_valid(std::size_t n, std::uint32_t q) const {
  if (positions.size() != n || values.size() != q || values[0] != 0) return false;
  std::vector<std::uint32_t> p(positions);
  std::sort(p.begin(), p.end());
  for (std::size_t k = 0; k < n; ++k)
    if (p[k] != k) return false;
  std::vector<Symbol> v(values.begin() + 1, values.end());
  std::sort(v.begin(), v.end());
  for (std::size_t k = 0; k < v.size(); ++k)
    if (v[k] != k + 1) return false;
  return true;
}

PermutationPair gen_permutations(std::size_t n, const GaloisField& field, Rng& rng) {
  if (n == 0) throw UsageError("need at least one client");
  PermutationPair keys;
  keys.positions.resize(n);
  std::iota(keys.positions.begin(), keys.positions.end(), 0U);
  rng.shuffle(std::span(keys.positions));
  keys.values.resize(field.order());
  std::iota(keys.values.begin(), keys.values.end(), Symbol{0});
  rng.shuffle(std::span(keys.values).subspan(1));
  return keys;
}

void redraw_positions_anchored(PermutationPair& keys, std::uint32_t anchor, std::uint32_t target, Rng& rng) {
  auto& pos = keys.positions;
  std::iota(pos.begin(), pos.end(), 0U);
  rng.shuffle(std::span(pos));
  const auto at = static_cast<std::size_t>(std::find(pos.begin(), pos.end(), target) - pos.begin());
  std::swap(pos[at], pos[anchor]);
}

PublicKeySets gen_public_sets(std::size_t n, std::size_t r, const GaloisField& field, Rng& rng) {
  const std::size_t nonzero = field.order() - 1;
  if (r > n || r > nonzero)
    throw UsageError(fmt::format("rate r={} exceeds min(n={}, q-1={})", r, n, nonzero));
  PublicKeySets pub;
  // Partial Fisher-Yates: the first r slots form a uniform ordered sample.
  std::vector<std::uint32_t> pos(n);
  std::iota(pos.begin(), pos.end(), 0U);
  for (std::size_t k = 0; k < r; ++k) std::swap(pos[k], pos[k + rng.below(n - k)]);
  pos.resize(r);
  std::vector<Symbol> val(nonzero);
  std::iota(val.begin(), val.end(), Symbol{1});
  for (std::size_t k = 0; k < r; ++k) std::swap(val[k], val[k + rng.below(nonzero - k)]);
  val.resize(r);
  pub.positions = std::move(pos);
  pub.values = std::move(val);
  return pub;
}

std::vector<Symbol> derive_row(const PermutationPair& keys, const PublicKeySets& pub, std::size_t n) {
  std::vector<Symbol> row(n, 0);
  for (std::size_t k = 0; k < pub.rate(); ++k) row[keys.map_position(pub.positions[k])] = keys.map_value(pub.values[k]);
  return row;
}

std::vector<Symbol> decrypt_row(const PermutationPair& keys, const PublicKeySets& pub, std::size_t n) {
  std::vector<std::uint32_t> inverse(n);
  for (std::uint32_t y = 0; y < n; ++y) inverse[keys.positions[y]] = y;
  constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
  std::vector<std::size_t> slot(n, kAbsent);
  for (std::size_t k = 0; k < pub.rate(); ++k) slot[pub.positions[k]] = k;
  std::vector<Symbol> row(n, 0);
  for (std::size_t column = 0; column < n; ++column) {
    const std::size_t k = slot[inverse[column]];
    if (k != kAbsent) row[column] = keys.values[pub.values[k]];
  }
  return row;
}

namespace {

BigInt factorial(std::uint64_t k) {
  BigInt f = 1;
  for (std::uint64_t i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

BigRational brute_force_cost(std::uint64_t q, std::uint64_t r, std::uint64_t n) {
  if (q <= 2) throw DomainError(fmt::format("brute-force cost is only defined for q > 2 (got q={})", q));
  if (n == 0) throw UsageError("n must be positive");

  // Decide the smaller branch in log space when the gap is unambiguous; this
  // skips building (q-1)! for large q where the power branch clearly wins.
  const double log_power = static_cast<double>(r) * std::log(static_cast<double>(q - 1));
  const double log_perm = std::lgamma(static_cast<double>(q)) + std::lgamma(static_cast<double>(n) + 1.0);
  const double margin = 1e-6 * std::max({1.0, log_power, log_perm}) + 1.0;

  BigInt smaller;
  if (log_power + margin < log_perm) {
    smaller = boost::multiprecision::pow(BigInt(q - 1), static_cast<unsigned>(r));
  } else if (log_perm + margin < log_power) {
    smaller = factorial(q - 1) * factorial(n);
  } else {
    const BigInt power = boost::multiprecision::pow(BigInt(q - 1), static_cast<unsigned>(r));
    const BigInt perm = factorial(q - 1) * factorial(n);
    smaller = power < perm ? power : perm;
  }
  return BigRational(smaller + 1, BigInt(2));
}

}  // namespace nclab
