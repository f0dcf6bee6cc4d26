#include "nclab/coop.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "nclab/errors.hpp"
#include "nclab/idnc.hpp"

namespace nclab {

UncodedBaseline uncoded_baseline(std::span<const ClientState> members, double p_prime) {
  if (!(p_prime >= 0.0 && p_prime < 1.0)) throw DomainError("U_c is undefined for p' outside [0, 1)");
  if (members.empty()) return {0, p_prime};
  BitSet wanted(members.front().has.size());
  for (const auto& m : members) wanted |= m.wants();
  return {wanted.count(), p_prime};
}

std::optional<double> gain_from_transcript(std::span<const RoundRecord> transcript, double p_prime) {
  if (transcript.empty()) return std::nullopt;
  std::vector<std::size_t> packets;
  for (const auto& rec : transcript)
    for (const auto& c : rec.credits)
      if (c.wanted) packets.push_back(c.packet);
  std::sort(packets.begin(), packets.end());
  packets.erase(std::unique(packets.begin(), packets.end()), packets.end());
  return UncodedBaseline{packets.size(), p_prime}.value() / static_cast<double>(transcript.size());
}

namespace {

void check_feasible(std::span<const ClientState> members) {
  if (members.empty()) return;
  BitSet held(members.front().has.size());
  BitSet wanted(held.size());
  for (const auto& m : members) {
    held |= m.has;
    wanted |= m.wants();
  }
  wanted.subtract(held);
  if (wanted.any())
    throw InfeasibleInstance(fmt::format("packet {} is wanted but held by no cluster member", wanted.find_first() + 1));
}

bool pending(std::span<const ClientState> members) {
  return std::any_of(members.begin(), members.end(), [](const ClientState& s) { return !s.decoded(); });
}

struct Candidate {
  std::size_t owner = 0;
  Clique clique;
};

}  // namespace

CoopMetrics run_coop(std::vector<ClientState>& members, const CoopOptions& options, Rng& rng) {
  if (!(options.erasure >= 0.0 && options.erasure <= 1.0)) throw UsageError("p' must lie in [0, 1]");
  check_feasible(members);
  CoopMetrics metrics;
  if (options.erasure < 1.0) metrics.baseline = uncoded_baseline(members, options.erasure);
  if (pending(members) && options.erasure >= 1.0)
    throw NonTermination("cooperative recovery cannot finish: every transmission is erased (p' = 1)");

  std::vector<ClientState> before;
  std::vector<Candidate> candidates(members.size());
  while (pending(members)) {
    if (metrics.Tc == options.round_cap)
      throw NonTermination(fmt::format("cooperative recovery exceeded the round cap of {}", options.round_cap));

    const IdncGraph global = build_global(members);
    const auto count = static_cast<std::ptrdiff_t>(members.size());
#pragma omp parallel for schedule(dynamic) if (global.size() > 256)
    for (std::ptrdiff_t s = 0; s < count; ++s) {
      const auto u = static_cast<std::size_t>(s);
      const IdncGraph local = restrict_to_holder(global, members[u].has, u);
      const auto weights = compute_weights(local, members);
      const BitSet servable = servable_vertices(global, members[u].has);
      candidates[u] = {u, greedy_clique(local, weights, &servable)};
    }
    std::size_t u0 = 0;
    for (std::size_t u = 1; u < members.size(); ++u)
      if (candidates[u].clique.size() > candidates[u0].clique.size()) u0 = u;
    const Clique& clique = candidates[u0].clique;
    if (clique.empty()) throw InfeasibleInstance("no member can serve any pending demand");

    RoundRecord rec;
    rec.t = metrics.Tc + 1;
    rec.transmitter = u0;
    rec.combo = clique.packets;
    rec.targets = clique.clients;
    rec.listeners = rec.targets;
    const BitSet delivered = deliver_round(u0, members.size(), options.erasure, rng);
    for (std::size_t i : rec.listeners) {
      ++members[i].listens;
      if (delivered.test(i)) rec.receivers.push_back(i);
    }

    if (options.audit) detail::snapshot_sets(members, before);
    const bool track = members[u0].tracks_payloads();
    if (track && !options.field) throw UsageError("payload tracking needs a field");
    Payload sum;
    if (track && !rec.receivers.empty()) sum = detail::combine(*options.field, rec.combo, members[u0].buffer);
    for (std::size_t i : rec.receivers) {
      ClientState& s = members[i];
      const std::size_t j = detail::unknowns(rec.combo, s.has).front();
      rec.credits.push_back({i, j, s.required.test(j)});
      if (track && s.tracks_payloads()) s.buffer.put(j, detail::peel(*options.field, sum, rec.combo, j, s.buffer));
      s.has.set(j);
    }
    if (options.audit) {
      const auto verdict = audit_round(rec, before);
      if (!verdict.passed) throw AuditFailure(verdict.detail);
    }
    ++metrics.Tc;
    metrics.removed_per_round.push_back(rec.removed());
    metrics.transmitters.push_back(u0);
    if (options.keep_transcript) metrics.transcript.push_back(std::move(rec));
  }
  if (metrics.Tc > 0) metrics.gain = metrics.baseline.value() / static_cast<double>(metrics.Tc);
  return metrics;
}

}  // namespace nclab
