#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nclab/bitset.hpp"
#include "nclab/codec.hpp"
#include "nclab/rng.hpp"

namespace nclab {

/// Erasure probabilities: p on the base-station downlink, p' between clients.
struct ChannelParams {
  double p = 0.0;
  double p_prime = 0.0;

  void validate() const;
};

enum class Status : std::uint8_t { has = 1, wants = 2, not_needed = 3 };

/// One client's view during recovery. Only the has-set and the required set
/// are stored; wants and not-needed sets are derived on demand.
struct ClientState {
  std::size_t id = 0;       // row of the decoding matrix
  BitSet has;               // Gamma_i
  BitSet required;          // R_i
  std::uint64_t listens = 0;
  PacketBuffer buffer;      // payloads of held packets; capacity 0 when not tracked

  BitSet wants() const { return required - has; }                     // Omega_i
  BitSet not_needed() const { return (required | has).complement(); }  // Psi_i
  std::size_t want_count() const { return required.count() - (required & has).count(); }
  bool decoded() const { return required.is_subset_of(has); }
  Status status(std::size_t j) const {
    if (has.test(j)) return Status::has;
    return required.test(j) ? Status::wants : Status::not_needed;
  }
  bool tracks_payloads() const { return buffer.capacity() != 0; }
};

/// S with s_ij in {1, 2, 3}.
class StatusMatrix {
 public:
  explicit StatusMatrix(std::span<const ClientState> states);

  std::size_t clients() const { return rows_; }
  std::size_t packets() const { return cols_; }
  Status at(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Status> cells_;
};

/// Every client listens to all n packets; each (client, packet) pair is
/// received independently with probability 1 - p.
std::vector<BitSet> initial_broadcast_centralized(std::size_t clients, std::size_t packets, double p, Rng& rng);

struct CoopSeeding {
  std::vector<BitSet> has;
  std::uint64_t transmissions = 0;  // base-station sends, including the first pass

  std::uint64_t retransmissions(std::size_t packets) const { return transmissions - packets; }
};

/// Repeats each packet until at least one cluster member holds it. Throws
/// NonTermination for p >= 1 or when a packet exceeds `round_cap` repeats.
CoopSeeding initial_broadcast_cooperative(std::size_t members, std::size_t packets, double p, Rng& rng,
                                          std::uint64_t round_cap = 1'000'000);

/// Builds per-client states for the given rows of A. `client_ids[k]` is the
/// matrix row of has_sets[k]. When `packets` is non-empty, held payloads are
/// copied into each client's buffer.
std::vector<ClientState> build_status(const DecodingMatrix& a, std::span<const BitSet> has_sets,
                                      std::span<const std::size_t> client_ids, std::span<const Packet> packets = {},
                                      std::uint64_t initial_listens = 0);
// Rows 0..has_sets.size()-1.
std::vector<ClientState> build_status(const DecodingMatrix& a, std::span<const BitSet> has_sets,
                                      std::span<const Packet> packets = {}, std::uint64_t initial_listens = 0);

/// Receivers of one transmission among `group` clients. One Bernoulli draw
/// per group member in index order; a client transmitter is excluded from
/// its own receiver set.
BitSet deliver_round(std::optional<std::size_t> transmitter, std::size_t group, double erasure, Rng& rng);

}  // namespace nclab
