#include "nclab/galois.hpp"

#include <charconv>
#include <tuple>
#include <utility>

#include <fmt/format.h>

#include "nclab/errors.hpp"

namespace nclab {

namespace {

bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::uint32_t standard_polynomial(unsigned m) {
  switch (m) {
    case 1: return 0x3;        // x + 1
    case 4: return 0x13;       // x^4 + x + 1
    case 8: return 0x11B;      // x^8 + x^4 + x^3 + x + 1
    case 16: return 0x1100B;   // x^16 + x^12 + x^3 + x + 1
    default: break;
  }
  throw UsageError(fmt::format("unsupported binary extension degree {} (supported: 1, 4, 8, 16)", m));
}

std::uint32_t parse_uint(std::string_view text, std::string_view what) {
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw UsageError(fmt::format("bad {} '{}'", what, text));
  return value;
}

}  // namespace

FieldSpec FieldSpec::prime(std::uint32_t p) {
  if (!is_prime(p) || p >= (1U << 16)) throw UsageError(fmt::format("prime field order must be a prime below 65536, got {}", p));
  return FieldSpec{FieldKind::prime, p, 1, 0};
}

FieldSpec FieldSpec::binary(unsigned m) {
  const auto poly = standard_polynomial(m);
  return FieldSpec{FieldKind::binary_extension, 1U << m, m, poly};
}

FieldSpec FieldSpec::parse(std::string_view text) {
  if (text.starts_with("prime:")) return prime(parse_uint(text.substr(6), "prime"));
  if (text.starts_with("gf2^")) return binary(parse_uint(text.substr(4), "extension degree"));
  if (text.starts_with("gf")) {
    const auto q = parse_uint(text.substr(2), "field order");
    for (unsigned m : {1U, 4U, 8U, 16U})
      if (q == (1U << m)) return binary(m);
  }
  throw UsageError(fmt::format("unknown field '{}' (use gf2, gf16, gf256, gf65536 or prime:<p>)", text));
}

std::string FieldSpec::name() const {
  if (kind == FieldKind::prime) return fmt::format("prime:{}", order);
  return fmt::format("gf{}", order);
}

GaloisField::GaloisField(FieldSpec spec) : spec_(spec) {
  if (spec_.kind == FieldKind::prime) {
    spec_ = FieldSpec::prime(spec_.order);
    mode_ = Mode::modular;
    const std::uint32_t q = spec_.order;
    inverse_.assign(q, 0);
    for (std::uint32_t a = 1; a < q; ++a) {
      if (inverse_[a] != 0) continue;
      // extended Euclid on (a, q)
      std::int64_t r0 = q, r1 = a, t0 = 0, t1 = 1;
      while (r1 != 0) {
        const std::int64_t k = r0 / r1;
        std::tie(r0, r1) = std::pair{r1, r0 - k * r1};
        std::tie(t0, t1) = std::pair{t1, t0 - k * t1};
      }
      const auto b = static_cast<Symbol>((t0 % q + q) % q);
      inverse_[a] = b;
      inverse_[b] = a;
    }
    return;
  }

  if (spec_.polynomial != standard_polynomial(spec_.degree) || spec_.order != (1U << spec_.degree))
    throw UsageError("binary extension field must use the standard reduction polynomial");

  if (spec_.degree > 8) {
    mode_ = Mode::carryless;
    return;
  }

  mode_ = Mode::tables;
  const std::uint32_t q = spec_.order;
  const std::uint32_t group = q - 1;
  // Find a generator of the multiplicative group.
  Symbol generator = 0;
  for (Symbol g = (q == 2 ? 1 : 2); g < q && generator == 0; ++g) {
    Symbol x = g;
    std::uint32_t ord = 1;
    while (x != 1) {
      x = clmul_reduce(x, g);
      ++ord;
    }
    if (ord == group) generator = g;
  }
  log_.assign(q, 0);
  exp_.assign(2 * group, 0);
  Symbol x = 1;
  for (std::uint32_t k = 0; k < group; ++k) {
    exp_[k] = x;
    exp_[k + group] = x;
    log_[x] = k;
    x = clmul_reduce(x, generator);
  }
  inverse_.assign(q, 0);
  for (Symbol a = 1; a < q; ++a) inverse_[a] = exp_[(group - log_[a]) % group];
}

Symbol GaloisField::clmul_reduce(Symbol a, Symbol b) const {
  std::uint64_t product = 0;
  for (std::uint64_t x = a; b != 0; b >>= 1, x <<= 1)
    if (b & 1U) product ^= x;
  const unsigned m = spec_.degree;
  for (int bit = 2 * static_cast<int>(m) - 2; bit >= static_cast<int>(m); --bit)
    if (product >> bit & 1U) product ^= static_cast<std::uint64_t>(spec_.polynomial) << (bit - static_cast<int>(m));
  return static_cast<Symbol>(product);
}

Symbol GaloisField::inv(Symbol a) const {
  if (a == 0) throw DomainError("inverse of zero");
  if (!inverse_.empty()) return inverse_[a];
  return pow(a, spec_.order - 2);
}

Symbol GaloisField::pow(Symbol a, std::uint64_t e) const {
  Symbol result = 1;
  while (e != 0) {
    if (e & 1U) result = mul(result, a);
    a = mul(a, a);
    e >>= 1;
  }
  return result;
}

void GaloisField::axpy(std::span<Symbol> dst, Symbol factor, std::span<const Symbol> src) const {
  if (factor == 0) return;
  const std::size_t len = dst.size();
  if (mode_ == Mode::tables) {
    const std::uint32_t lf = log_[factor];
    for (std::size_t k = 0; k < len; ++k)
      if (src[k] != 0) dst[k] ^= exp_[lf + log_[src[k]]];
    return;
  }
  if (mode_ == Mode::modular) {
    const std::uint64_t q = spec_.order;
    for (std::size_t k = 0; k < len; ++k)
      dst[k] = static_cast<Symbol>((dst[k] + static_cast<std::uint64_t>(factor) * src[k]) % q);
    return;
  }
  for (std::size_t k = 0; k < len; ++k) dst[k] ^= mul(factor, src[k]);
}

void GaloisField::scale(std::span<Symbol> dst, Symbol factor) const {
  for (auto& x : dst) x = mul(x, factor);
}

void GaloisField::accumulate(std::span<Symbol> dst, std::span<const Symbol> src) const {
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = add(dst[k], src[k]);
}

void GaloisField::subtract(std::span<Symbol> dst, std::span<const Symbol> src) const {
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = sub(dst[k], src[k]);
}

FieldElement::FieldElement(const GaloisField& field, Symbol value) : field_(&field), value_(value) {
  if (!field.contains(value)) throw UsageError(fmt::format("{} is not an element of {}", value, field.spec().name()));
}

namespace {
void require_same_field(const FieldElement& a, const FieldElement& b) {
  if (!(a.field().spec() == b.field().spec()))
    throw UsageError(fmt::format("mixed-field operands: {} and {}", a.field().spec().name(), b.field().spec().name()));
}
}  // namespace

FieldElement FieldElement::inverse() const { return {*field_, field_->inv(value_)}; }

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  return {a.field(), a.field().add(a.value_, b.value_)};
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  return {a.field(), a.field().sub(a.value_, b.value_)};
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  return {a.field(), a.field().mul(a.value_, b.value_)};
}

}  // namespace nclab
