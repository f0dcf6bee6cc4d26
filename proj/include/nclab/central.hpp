#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nclab/channel.hpp"
#include "nclab/codec.hpp"
#include "nclab/galois.hpp"
#include "nclab/rng.hpp"

namespace nclab {

/// A packet a client learned in one round. `wanted` is false for
/// opportunistic (Psi) decodes in the modified variant.
struct Credit {
  std::size_t client = 0;
  std::size_t packet = 0;
  bool wanted = true;
  friend bool operator==(const Credit&, const Credit&) = default;
};

/// One transmission. Client numbers are positions in the state list.
struct RoundRecord {
  std::uint64_t t = 0;                     // 1-based
  std::optional<std::size_t> transmitter;  // nullopt: the base station
  std::vector<std::size_t> combo;          // packet ids summed into the transmission
  std::vector<std::size_t> targets;        // clients owning a clique vertex
  std::vector<std::size_t> listeners;      // radios on this round
  std::vector<std::size_t> receivers;      // listeners that got the transmission
  std::vector<Credit> credits;

  std::size_t removed() const;  // vertices deleted from the graph
};

struct AuditResult {
  bool passed = true;
  std::string detail;
};

/// Checks that every credited client lacked exactly one packet of the combo
/// before the round and was credited with that packet, that receivers were
/// listening and that a client transmitter held the whole combo.
AuditResult audit_round(const RoundRecord& record, std::span<const ClientState> before);

/// "t tx combo targets listeners receivers" with 1-based ids and "-" for an
/// empty list.
std::string format_round(const RoundRecord& record);

enum class Variant { basic, modified };

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view text);

struct RecoveryPayloads {
  const GaloisField* field = nullptr;
  std::span<const Packet> packets;  // base-station copies; empty disables payload tracking
};

struct CentralOptions {
  Variant variant = Variant::basic;
  double erasure = 0.0;  // p in the recovery phase
  std::uint64_t round_cap = 1'000'000;
  bool audit = true;
  bool keep_transcript = false;
  RecoveryPayloads payloads;
};

struct CentralMetrics {
  std::uint64_t T = 0;
  double throughput_ratio = 1.0;              // n / (n + T)
  std::vector<std::uint64_t> listens;         // recovery-phase listens per client
  std::vector<std::size_t> removed_per_round;
  std::vector<RoundRecord> transcript;        // filled when keep_transcript
};

/// Centralized recovery: the base station repeatedly broadcasts the field sum of a
/// greedy clique of the global IDNC graph until every Wants set is empty.
/// Basic: only targeted clients listen. Modified: every client with exactly
/// one unknown in the combination listens and decodes it, needed or not.
/// Throws NonTermination for p = 1 with pending wants or past the round cap,
/// AuditFailure when auditing is on and a round fails.
CentralMetrics run_central(std::vector<ClientState>& states, const CentralOptions& options, Rng& rng);

namespace detail {
// Field sum of the combo, from the base station's packets or a client's buffer.
Payload combine(const GaloisField& field, std::span<const std::size_t> combo, std::span<const Packet> source);
Payload combine(const GaloisField& field, std::span<const std::size_t> combo, const PacketBuffer& source);
// Recovers the single unknown packet of `combo` from a client's buffer.
Payload peel(const GaloisField& field, const Payload& sum, std::span<const std::size_t> combo, std::size_t unknown,
             const PacketBuffer& buffer);
// The packets of `combo` outside `has`, capped at two.
std::vector<std::size_t> unknowns(std::span<const std::size_t> combo, const BitSet& has);
// Copies ids, has-sets and required sets only; enough for audit_round.
void snapshot_sets(std::span<const ClientState> states, std::vector<ClientState>& out);
}  // namespace detail

}  // namespace nclab
