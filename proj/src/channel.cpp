#include "nclab/channel.hpp"

#include <fmt/format.h>

#include "nclab/errors.hpp"

namespace nclab {

namespace {
void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw UsageError(fmt::format("{} must lie in [0, 1], got {}", name, p));
}
}  // namespace

void ChannelParams::validate() const {
  check_probability(p, "p");
  check_probability(p_prime, "p'");
}

StatusMatrix::StatusMatrix(std::span<const ClientState> states) : rows_(states.size()) {
  cols_ = states.empty() ? 0 : states.front().has.size();
  cells_.reserve(rows_ * cols_);
  for (const auto& s : states)
    for (std::size_t j = 0; j < cols_; ++j) cells_.push_back(s.status(j));
}

std::vector<BitSet> initial_broadcast_centralized(std::size_t clients, std::size_t packets, double p, Rng& rng) {
  check_probability(p, "p");
  std::vector<BitSet> has(clients, BitSet(packets));
  for (std::size_t j = 0; j < packets; ++j)
    for (std::size_t i = 0; i < clients; ++i)
      if (rng.bernoulli(1.0 - p)) has[i].set(j);
  return has;
}

CoopSeeding initial_broadcast_cooperative(std::size_t members, std::size_t packets, double p, Rng& rng,
                                          std::uint64_t round_cap) {
  check_probability(p, "p");
  if (members == 0) throw UsageError("cluster must be nonempty");
  if (p >= 1.0 && packets > 0) throw NonTermination("cooperative seeding cannot cover any packet with p = 1");
  CoopSeeding out{std::vector<BitSet>(members, BitSet(packets)), 0};
  for (std::size_t j = 0; j < packets; ++j) {
    bool covered = false;
    for (std::uint64_t round = 0; !covered; ++round) {
      if (round == round_cap) throw NonTermination(fmt::format("packet {} not received after {} repeats", j, round_cap));
      ++out.transmissions;
      for (std::size_t i = 0; i < members; ++i)
        if (rng.bernoulli(1.0 - p)) {
          out.has[i].set(j);
          covered = true;
        }
    }
  }
  return out;
}

std::vector<ClientState> build_status(const DecodingMatrix& a, std::span<const BitSet> has_sets,
                                      std::span<const std::size_t> client_ids, std::span<const Packet> packets,
                                      std::uint64_t initial_listens) {
  if (client_ids.size() != has_sets.size()) throw UsageError("build_status: one client id per has-set");
  if (!packets.empty() && packets.size() != a.size()) throw UsageError("build_status: packet count mismatch");
  std::vector<ClientState> states;
  states.reserve(has_sets.size());
  for (std::size_t k = 0; k < has_sets.size(); ++k) {
    if (has_sets[k].size() != a.size()) throw UsageError("build_status: has-set size mismatch");
    if (client_ids[k] >= a.size()) throw UsageError("build_status: client id out of range");
    ClientState s;
    s.id = client_ids[k];
    s.has = has_sets[k];
    s.required = a.required(client_ids[k]);
    s.listens = initial_listens;
    if (!packets.empty()) {
      s.buffer = PacketBuffer(a.size());
      s.has.for_each([&](std::size_t j) { s.buffer.put(j, packets[j].payload); });
    }
    states.push_back(std::move(s));
  }
  return states;
}

std::vector<ClientState> build_status(const DecodingMatrix& a, std::span<const BitSet> has_sets,
                                      std::span<const Packet> packets, std::uint64_t initial_listens) {
  std::vector<std::size_t> ids(has_sets.size());
  for (std::size_t k = 0; k < ids.size(); ++k) ids[k] = k;
  return build_status(a, has_sets, ids, packets, initial_listens);
}

BitSet deliver_round(std::optional<std::size_t> transmitter, std::size_t group, double erasure, Rng& rng) {
  check_probability(erasure, "erasure probability");
  BitSet received(group);
  for (std::size_t i = 0; i < group; ++i)
    if (rng.bernoulli(1.0 - erasure)) received.set(i);
  if (transmitter) received.reset(*transmitter);
  return received;
}

}  // namespace nclab
