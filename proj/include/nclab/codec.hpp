#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "nclab/bitset.hpp"
#include "nclab/galois.hpp"
#include "nclab/keyshare.hpp"
#include "nclab/rng.hpp"

namespace nclab {

using Payload = std::vector<Symbol>;

struct Message {
  std::size_t owner = 0;
  Payload payload;
};

struct Packet {
  std::size_t id = 0;  // 0-based
  Payload payload;
};

/// The n x n decoding matrix A with X = A P. Row i is client i's private
/// decoding key; its nonzero positions I_i name the packets R_i it needs.
class DecodingMatrix {
 public:
  DecodingMatrix(FieldPtr field, std::size_t n, std::vector<Symbol> entries);

  std::size_t size() const { return n_; }
  // Number of nonzeros per row; rows are required to agree.
  std::size_t rate() const { return rate_; }
  const GaloisField& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }

  Symbol at(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  std::span<const Symbol> row(std::size_t i) const { return {entries_.data() + i * n_, n_}; }
  std::span<const Symbol> entries() const { return entries_; }

  // I_i as sorted column indices.
  std::vector<std::size_t> support(std::size_t i) const;
  // R_i as a packet set.
  BitSet required(std::size_t i) const;

 private:
  FieldPtr field_;
  std::size_t n_;
  std::size_t rate_;
  std::vector<Symbol> entries_;
};

/// PA = LU with row pivoting over F_q. Built once, reused for every payload
/// coordinate.
class LuFactors {
 public:
  // nullopt when the matrix is singular.
  static std::optional<LuFactors> factorize(const GaloisField& field, std::size_t n, std::span<const Symbol> a);

  std::size_t size() const { return n_; }
  // Solves A x = b in place for every column of the n x width row-major block.
  void solve_in_place(const GaloisField& field, std::span<Symbol> block, std::size_t width) const;
  // Same, restricted to columns [c0, c1). Disjoint ranges may run concurrently.
  void solve_in_place_columns(const GaloisField& field, std::span<Symbol> block, std::size_t width, std::size_t c0,
                              std::size_t c1) const;

 private:
  std::size_t n_ = 0;
  std::vector<Symbol> lu_;
  std::vector<std::size_t> pivot_rows_;  // row of the original matrix at each position
};

bool is_invertible(const GaloisField& field, std::size_t n, std::span<const Symbol> a);

struct GenerationStats {
  std::size_t public_resamples = 0;
  std::size_t permutation_resamples = 0;
};

/// A decoding matrix together with the key material that produced it.
struct KeyedMatrix {
  DecodingMatrix matrix;
  PublicKeySets pub;
  std::vector<PermutationPair> keys;
  GenerationStats stats;
};

inline constexpr std::size_t kPublicSetRetries = 100;
inline constexpr std::size_t kPermutationRetries = 100;

/// Builds an invertible A whose row i is derive_row(keys[i], pub). On a
/// singular draw the public sets are resampled (up to kPublicSetRetries);
/// after that the position permutations are redrawn so that the first public
/// position lands on a distinct column for every client, which guarantees a
/// structural perfect matching. Throws GenerationFailure when both budgets
/// are spent, UsageError when r is out of range.
KeyedMatrix generate_matrix(std::size_t n, std::size_t r, FieldPtr field, std::vector<PermutationPair> keys, Rng& rng);

// Draws fresh keys for n clients, then calls generate_matrix.
KeyedMatrix generate_keyed_matrix(std::size_t n, std::size_t r, FieldPtr field, Rng& rng);

std::vector<Message> random_messages(std::size_t n, std::size_t m_len, const GaloisField& field, Rng& rng);

/// P = A^{-1} X, coordinate by coordinate. Payload coordinates are solved in
/// parallel for long payloads.
std::vector<Packet> encode(const DecodingMatrix& a, std::span<const Message> messages);
/// Single-threaded reference with identical output.
std::vector<Packet> encode_serial(const DecodingMatrix& a, std::span<const Message> messages);

/// Sparse packet store indexed by packet id.
class PacketBuffer {
 public:
  PacketBuffer() = default;
  explicit PacketBuffer(std::size_t n) : slots_(n), present_(n) {}

  std::size_t capacity() const { return slots_.size(); }
  bool contains(std::size_t j) const { return j < slots_.size() && present_.test(j); }
  const Payload& get(std::size_t j) const { return slots_[j]; }
  void put(std::size_t j, Payload payload) {
    slots_[j] = std::move(payload);
    present_.set(j);
  }
  void erase(std::size_t j) {
    slots_[j].clear();
    present_.reset(j);
  }
  const BitSet& present() const { return present_; }

 private:
  std::vector<Payload> slots_;
  BitSet present_;
};

/// x_i = sum over I_i of A_i[j] p_j. Packets outside I_i are ignored. Throws
/// NotYetDecodable naming the first missing packet.
Message decode_client(const DecodingMatrix& a, std::size_t client, const PacketBuffer& have);
Message decode_with_row(const GaloisField& field, std::size_t owner, std::span<const Symbol> row, const PacketBuffer& have);

/// Text instance file: field, sizes, seed, matrix, messages and packets.
struct Instance {
  FieldSpec field;
  std::size_t n = 0;
  std::size_t r = 0;
  std::uint64_t seed = 0;
  std::size_t m_len = 0;
  std::vector<Symbol> matrix;             // n*n row-major
  std::vector<Payload> messages;          // n x m_len
  std::vector<Payload> packets;           // n x m_len
};

Instance make_instance(std::size_t n, std::size_t r, const FieldSpec& field, std::size_t m_len, std::uint64_t seed);
void write_instance(std::ostream& out, const Instance& instance);
// Throws UsageError on malformed input.
Instance read_instance(std::istream& in);

}  // namespace nclab
