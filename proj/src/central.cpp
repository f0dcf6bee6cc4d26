#include "nclab/central.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "nclab/errors.hpp"
#include "nclab/idnc.hpp"

namespace nclab {

std::size_t RoundRecord::removed() const {
  return static_cast<std::size_t>(std::count_if(credits.begin(), credits.end(), [](const Credit& c) { return c.wanted; }));
}

namespace detail {

std::vector<std::size_t> unknowns(std::span<const std::size_t> combo, const BitSet& has) {
  std::vector<std::size_t> out;
  for (std::size_t j : combo) {
    if (has.test(j)) continue;
    out.push_back(j);
    if (out.size() == 2) break;
  }
  return out;
}

Payload combine(const GaloisField& field, std::span<const std::size_t> combo, std::span<const Packet> source) {
  Payload sum;
  for (std::size_t j : combo) {
    if (sum.empty()) sum.assign(source[j].payload.size(), 0);
    field.accumulate(sum, source[j].payload);
  }
  return sum;
}

Payload combine(const GaloisField& field, std::span<const std::size_t> combo, const PacketBuffer& source) {
  Payload sum;
  for (std::size_t j : combo) {
    if (!source.contains(j)) throw UsageError(fmt::format("transmitter does not hold packet {}", j + 1));
    if (sum.empty()) sum.assign(source.get(j).size(), 0);
    field.accumulate(sum, source.get(j));
  }
  return sum;
}

Payload peel(const GaloisField& field, const Payload& sum, std::span<const std::size_t> combo, std::size_t unknown,
             const PacketBuffer& buffer) {
  Payload out = sum;
  for (std::size_t j : combo) {
    if (j == unknown) continue;
    if (!buffer.contains(j)) throw AuditFailure(fmt::format("client cannot peel packet {}: {} missing", unknown + 1, j + 1));
    field.subtract(out, buffer.get(j));
  }
  return out;
}

}  // namespace detail

AuditResult audit_round(const RoundRecord& record, std::span<const ClientState> before) {
  auto fail = [&](std::string what) { return AuditResult{false, fmt::format("round {}: {}", record.t, what)}; };
  if (record.transmitter) {
    if (*record.transmitter >= before.size()) return fail("transmitter out of range");
    for (std::size_t j : record.combo)
      if (!before[*record.transmitter].has.test(j))
        return fail(fmt::format("transmitter {} lacks packet {}", *record.transmitter + 1, j + 1));
  }
  for (std::size_t c : record.receivers)
    if (!std::binary_search(record.listeners.begin(), record.listeners.end(), c))
      return fail(fmt::format("client {} received without listening", c + 1));
  for (const Credit& credit : record.credits) {
    if (credit.client >= before.size()) return fail("credited client out of range");
    if (!std::binary_search(record.receivers.begin(), record.receivers.end(), credit.client))
      return fail(fmt::format("client {} credited without reception", credit.client + 1));
    const auto missing = detail::unknowns(record.combo, before[credit.client].has);
    if (missing.size() != 1)
      return fail(fmt::format("client {} had {} unknowns in the combination", credit.client + 1,
                              missing.size() == 2 ? "two or more" : "no"));
    if (missing.front() != credit.packet)
      return fail(fmt::format("client {} credited with {} but its unknown is {}", credit.client + 1, credit.packet + 1,
                              missing.front() + 1));
    if (credit.wanted != before[credit.client].required.test(credit.packet))
      return fail(fmt::format("client {} credit for packet {} has the wrong wanted flag", credit.client + 1,
                              credit.packet + 1));
  }
  return {};
}

namespace {

std::string id_list(std::span<const std::size_t> ids) {
  if (ids.empty()) return "-";
  std::string out;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(ids[k] + 1);
  }
  return out;
}

}  // namespace

std::string format_round(const RoundRecord& record) {
  return fmt::format("{} tx={} combo={} targets={} listeners={} receivers={}", record.t,
                     record.transmitter ? std::to_string(*record.transmitter + 1) : std::string("bs"),
                     id_list(record.combo), id_list(record.targets), id_list(record.listeners),
                     id_list(record.receivers));
}

std::string_view variant_name(Variant v) { return v == Variant::basic ? "basic" : "modified"; }

Variant parse_variant(std::string_view text) {
  if (text == "basic") return Variant::basic;
  if (text == "modified") return Variant::modified;
  throw UsageError(fmt::format("unknown variant '{}' (basic|modified)", text));
}

namespace {

bool pending(std::span<const ClientState> states) {
  return std::any_of(states.begin(), states.end(), [](const ClientState& s) { return !s.decoded(); });
}

}  // namespace

namespace detail {

void snapshot_sets(std::span<const ClientState> states, std::vector<ClientState>& out) {
  out.resize(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    out[i].id = states[i].id;
    out[i].has = states[i].has;
    out[i].required = states[i].required;
  }
}

}  // namespace detail

namespace {

}  // namespace

CentralMetrics run_central(std::vector<ClientState>& states, const CentralOptions& options, Rng& rng) {
  if (!(options.erasure >= 0.0 && options.erasure <= 1.0)) throw UsageError("recovery erasure must lie in [0, 1]");
  const bool track = !options.payloads.packets.empty();
  if (track && !options.payloads.field) throw UsageError("payload tracking needs a field");

  CentralMetrics metrics;
  metrics.listens.assign(states.size(), 0);
  if (pending(states) && options.erasure >= 1.0)
    throw NonTermination("recovery cannot finish: every retransmission is erased (p = 1)");

  std::vector<ClientState> before;
  while (pending(states)) {
    if (metrics.T == options.round_cap)
      throw NonTermination(fmt::format("recovery exceeded the round cap of {}", options.round_cap));

    const IdncGraph graph = build_global(states);
    const auto weights = compute_weights(graph, states);
    const Clique clique = greedy_clique(graph, weights);

    RoundRecord rec;
    rec.t = metrics.T + 1;
    rec.combo = clique.packets;
    rec.targets = clique.clients;
    if (options.variant == Variant::basic) {
      rec.listeners = rec.targets;
    } else {
      for (std::size_t i = 0; i < states.size(); ++i)
        if (detail::unknowns(rec.combo, states[i].has).size() == 1) rec.listeners.push_back(i);
    }
    const BitSet delivered = deliver_round(std::nullopt, states.size(), options.erasure, rng);
    for (std::size_t i : rec.listeners) {
      ++metrics.listens[i];
      if (delivered.test(i)) rec.receivers.push_back(i);
    }

    if (options.audit) detail::snapshot_sets(states, before);
    Payload sum;
    if (track && !rec.receivers.empty()) sum = detail::combine(*options.payloads.field, rec.combo, options.payloads.packets);
    for (std::size_t i : rec.receivers) {
      ClientState& s = states[i];
      const std::size_t j = detail::unknowns(rec.combo, s.has).front();
      rec.credits.push_back({i, j, s.required.test(j)});
      if (s.tracks_payloads()) s.buffer.put(j, detail::peel(*options.payloads.field, sum, rec.combo, j, s.buffer));
      s.has.set(j);
      ++s.listens;
    }
    // Listeners that lost the packet still spent the listen.
    for (std::size_t i : rec.listeners)
      if (!delivered.test(i)) ++states[i].listens;

    if (options.audit) {
      const auto verdict = audit_round(rec, before);
      if (!verdict.passed) throw AuditFailure(verdict.detail);
    }
    ++metrics.T;
    metrics.removed_per_round.push_back(rec.removed());
    if (options.keep_transcript) metrics.transcript.push_back(std::move(rec));
  }
  metrics.throughput_ratio = states.empty() ? 1.0
                                            : static_cast<double>(states.size()) /
                                                  static_cast<double>(states.size() + metrics.T);
  return metrics;
}

}  // namespace nclab
