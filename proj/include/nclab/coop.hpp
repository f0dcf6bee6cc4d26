#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nclab/central.hpp"
#include "nclab/channel.hpp"
#include "nclab/rng.hpp"

namespace nclab {

struct UncodedBaseline {
  std::size_t wanted_union = 0;  // |union of Omega_i| over the cluster
  double p_prime = 0.0;

  double value() const { return static_cast<double>(wanted_union) / (1.0 - p_prime); }
};

/// U_c from the members' current Wants sets. Throws DomainError for p' = 1.
UncodedBaseline uncoded_baseline(std::span<const ClientState> members, double p_prime);

struct CoopOptions {
  double erasure = 0.0;  // p' between members
  std::uint64_t round_cap = 1'000'000;
  bool audit = true;
  bool keep_transcript = false;
  const GaloisField* field = nullptr;  // needed when members track payloads
};

struct CoopMetrics {
  std::uint64_t Tc = 0;
  UncodedBaseline baseline;
  std::optional<double> gain;  // U_c / T_c; absent when T_c = 0
  std::vector<std::size_t> removed_per_round;
  std::vector<std::size_t> transmitters;  // u0 per round
  std::vector<RoundRecord> transcript;
};

/// Cooperative recovery. Each round every member u grows a greedy clique in its local
/// graph G_u over the vertices it can serve; the member with the largest
/// clique (lowest index on ties) broadcasts the field sum of the clique's
/// packets from its own buffer. Only targeted members update.
/// Throws InfeasibleInstance when a wanted packet is held by no member,
/// NonTermination for p' = 1 with pending wants or past the round cap.
CoopMetrics run_coop(std::vector<ClientState>& members, const CoopOptions& options, Rng& rng);

/// Gain recomputed from a kept transcript: wanted packets ever credited,
/// over (1 - p'), over the number of rounds.
std::optional<double> gain_from_transcript(std::span<const RoundRecord> transcript, double p_prime);

}  // namespace nclab
