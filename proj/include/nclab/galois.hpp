#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nclab {

using Symbol = std::uint32_t;

enum class FieldKind { prime, binary_extension };

/// Description of a finite field F_q. Prime fields need q < 2^16; binary
/// extension fields use a fixed reduction polynomial per degree.
struct FieldSpec {
  FieldKind kind = FieldKind::binary_extension;
  std::uint32_t order = 256;
  unsigned degree = 8;         // 1 for prime fields
  std::uint32_t polynomial = 0x11B;  // binary extension only, includes x^m

  static FieldSpec prime(std::uint32_t p);
  static FieldSpec binary(unsigned m);
  // Accepts "gf2", "gf16", "gf256", "gf65536", "gf2^m" and "prime:<p>".
  static FieldSpec parse(std::string_view text);

  std::string name() const;
  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

/// Arithmetic over one finite field. Immutable after construction; share it
/// freely between threads.
class GaloisField {
 public:
  explicit GaloisField(FieldSpec spec);

  const FieldSpec& spec() const { return spec_; }
  std::uint32_t order() const { return spec_.order; }
  bool is_binary() const { return spec_.kind == FieldKind::binary_extension; }
  bool contains(Symbol a) const { return a < spec_.order; }

  Symbol add(Symbol a, Symbol b) const {
    if (is_binary()) return a ^ b;
    const Symbol s = a + b;
    return s >= spec_.order ? s - spec_.order : s;
  }
  Symbol neg(Symbol a) const {
    if (is_binary() || a == 0) return a;
    return spec_.order - a;
  }
  Symbol sub(Symbol a, Symbol b) const { return add(a, neg(b)); }

  Symbol mul(Symbol a, Symbol b) const {
    if (a == 0 || b == 0) return 0;
    switch (mode_) {
      case Mode::modular:
        return static_cast<Symbol>((static_cast<std::uint64_t>(a) * b) % spec_.order);
      case Mode::tables:
        return exp_[log_[a] + log_[b]];
      case Mode::carryless:
        break;
    }
    return clmul_reduce(a, b);
  }

  // Throws DomainError for a == 0.
  Symbol inv(Symbol a) const;
  Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }
  Symbol pow(Symbol a, std::uint64_t e) const;

  // dst[k] += factor * src[k]
  void axpy(std::span<Symbol> dst, Symbol factor, std::span<const Symbol> src) const;
  // dst[k] *= factor
  void scale(std::span<Symbol> dst, Symbol factor) const;
  // dst[k] += src[k]
  void accumulate(std::span<Symbol> dst, std::span<const Symbol> src) const;
  // dst[k] -= src[k]
  void subtract(std::span<Symbol> dst, std::span<const Symbol> src) const;

 private:
  enum class Mode { modular, tables, carryless };

  Symbol clmul_reduce(Symbol a, Symbol b) const;

  FieldSpec spec_;
  Mode mode_;
  std::vector<std::uint32_t> log_;
  std::vector<Symbol> exp_;      // doubled so exp_[log a + log b] needs no reduction
  std::vector<Symbol> inverse_;  // prime fields and table fields
};

using FieldPtr = std::shared_ptr<const GaloisField>;

inline FieldPtr make_field(const FieldSpec& spec) { return std::make_shared<const GaloisField>(spec); }

/// Checked element: carries its field so that mixing fields is caught.
/// Intended for API boundaries and tests; inner loops use raw Symbols.
class FieldElement {
 public:
  FieldElement(const GaloisField& field, Symbol value);

  Symbol value() const { return value_; }
  const GaloisField& field() const { return *field_; }

  FieldElement inverse() const;

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.value_ == b.value_ && a.field_->spec() == b.field_->spec();
  }

 private:
  const GaloisField* field_;
  Symbol value_;
};

}  // namespace nclab
