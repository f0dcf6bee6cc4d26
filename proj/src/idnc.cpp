#include "nclab/idnc.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "nclab/errors.hpp"

namespace nclab {

IdncGraph::IdncGraph(std::vector<Vertex> vertices, std::vector<std::size_t> client_offsets, std::vector<BitSet> adjacency,
                     GraphScope scope, std::optional<std::size_t> owner)
    : vertices_(std::move(vertices)),
      client_offsets_(std::move(client_offsets)),
      adjacency_(std::move(adjacency)),
      scope_(scope),
      owner_(owner) {
  if (adjacency_.size() != vertices_.size()) throw UsageError("graph: one adjacency row per vertex");
}

std::size_t IdncGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& row : adjacency_) twice += row.count();
  return twice / 2;
}

std::optional<std::size_t> IdncGraph::find(Vertex v) const {
  if (v.client >= clients()) return std::nullopt;
  const auto [first, last] = client_range(v.client);
  for (std::size_t k = first; k < last; ++k)
    if (vertices_[k].packet == v.packet) return k;
  return std::nullopt;
}

bool IdncGraph::is_clique(std::span<const std::size_t> members) const {
  for (std::size_t a = 0; a < members.size(); ++a)
    for (std::size_t b = a + 1; b < members.size(); ++b)
      if (!adjacent(members[a], members[b])) return false;
  return true;
}

bool IdncGraph::is_subgraph_of(const IdncGraph& other) const {
  if (other.vertices_ != vertices_) return false;
  for (std::size_t v = 0; v < size(); ++v)
    if (!adjacency_[v].is_subset_of(other.adjacency_[v])) return false;
  return true;
}

void IdncGraph::write_edge_list(std::ostream& out, std::span<const std::uint64_t> weights) const {
  out << fmt::format("# idnc-graph scope={} vertices={} edges={}\n",
                     scope_ == GraphScope::global ? "global" : fmt::format("local:{}", owner_.value_or(0) + 1), size(),
                     edge_count());
  for (std::size_t v = 0; v < size(); ++v) {
    out << fmt::format("v {} {} {}", v, vertices_[v].client + 1, vertices_[v].packet + 1);
    if (!weights.empty()) out << ' ' << weights[v];
    out << '\n';
  }
  for (std::size_t a = 0; a < size(); ++a)
    adjacency_[a].for_each([&](std::size_t b) {
      if (a < b) out << fmt::format("e {} {}\n", a, b);
    });
}

namespace {

struct VertexLayout {
  std::vector<Vertex> vertices;
  std::vector<std::size_t> offsets;
};

VertexLayout collect_vertices(std::span<const ClientState> states) {
  VertexLayout layout;
  layout.offsets.reserve(states.size() + 1);
  layout.offsets.push_back(0);
  for (std::size_t i = 0; i < states.size(); ++i) {
    states[i].wants().for_each(
        [&](std::size_t j) { layout.vertices.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)}); });
    layout.offsets.push_back(layout.vertices.size());
  }
  return layout;
}

std::size_t packet_count(std::span<const ClientState> states) { return states.empty() ? 0 : states.front().has.size(); }

constexpr std::ptrdiff_t kParallelRows = 512;

}  // namespace

IdncGraph build_global(std::span<const ClientState> states) {
  auto layout = collect_vertices(states);
  const std::size_t count = layout.vertices.size();
  const std::size_t packets = packet_count(states);

  // by_packet[j]: vertices demanding p_j. holders[j]: vertices of clients
  // holding p_j. held[i]: vertices whose packet client i holds.
  std::vector<BitSet> by_packet(packets, BitSet(count));
  for (std::size_t v = 0; v < count; ++v) by_packet[layout.vertices[v].packet].set(v);
  std::vector<BitSet> holders(packets, BitSet(count));
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (layout.offsets[k] == layout.offsets[k + 1]) continue;
    states[k].has.for_each([&](std::size_t j) { holders[j].set_range(layout.offsets[k], layout.offsets[k + 1]); });
  }
  std::vector<BitSet> held(states.size(), BitSet(count));
  for (std::size_t i = 0; i < states.size(); ++i)
    states[i].has.for_each([&](std::size_t l) { held[i] |= by_packet[l]; });

  std::vector<BitSet> adjacency(count);
#pragma omp parallel for schedule(static) if (static_cast<std::ptrdiff_t>(count) > kParallelRows)
  for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(count); ++s) {
    const auto v = static_cast<std::size_t>(s);
    const Vertex& x = layout.vertices[v];
    BitSet row = held[x.client] & holders[x.packet];  // rule 2
    row |= by_packet[x.packet];                       // rule 1
    row.reset(v);
    adjacency[v] = std::move(row);
  }
  return {std::move(layout.vertices), std::move(layout.offsets), std::move(adjacency), GraphScope::global, std::nullopt};
}

BitSet servable_vertices(const IdncGraph& graph, const BitSet& has) {
  BitSet out(graph.size());
  for (std::size_t v = 0; v < graph.size(); ++v)
    if (has.test(graph.vertex(v).packet)) out.set(v);
  return out;
}

IdncGraph restrict_to_holder(const IdncGraph& global, const BitSet& holder_has, std::size_t u) {
  const BitSet mask = servable_vertices(global, holder_has);
  std::vector<BitSet> adjacency(global.size(), BitSet(global.size()));
  for (std::size_t v = 0; v < global.size(); ++v)
    if (mask.test(v)) adjacency[v] = global.neighbors(v) & mask;
  std::vector<std::size_t> offsets(global.clients() + 1, 0);
  for (std::size_t i = 0; i < global.clients(); ++i) {
    offsets[i] = global.client_range(i).first;
    offsets[i + 1] = global.client_range(i).second;
  }
  return {global.vertices(), std::move(offsets), std::move(adjacency), GraphScope::local, u};
}

IdncGraph build_local(std::span<const ClientState> states, std::size_t u) {
  if (u >= states.size()) throw UsageError(fmt::format("local graph owner {} is not a cluster member", u));
  return restrict_to_holder(build_global(states), states[u].has, u);
}

std::vector<std::uint64_t> compute_weights(const IdncGraph& graph, std::span<const ClientState> states) {
  (void)states;  // |Omega_t| equals the size of client t's vertex range
  // Bit planes of the neighbour weight: plane b holds the vertices whose
  // client has bit b set in |Omega|. Then sum_{nb} |Omega| is
  // sum_b 2^b |N(v) & plane_b|.
  std::size_t widest = 0;
  for (std::size_t t = 0; t < graph.clients(); ++t) {
    const auto [first, last] = graph.client_range(t);
    widest = std::max(widest, last - first);
  }
  std::vector<BitSet> planes;
  for (std::size_t b = 0; (std::size_t{1} << b) <= widest; ++b) {
    BitSet plane(graph.size());
    for (std::size_t t = 0; t < graph.clients(); ++t) {
      const auto [first, last] = graph.client_range(t);
      if (((last - first) >> b) & 1U) plane.set_range(first, last);
    }
    planes.push_back(std::move(plane));
  }
  std::vector<std::uint64_t> weights(graph.size(), 0);
#pragma omp parallel for schedule(static) if (static_cast<std::ptrdiff_t>(graph.size()) > kParallelRows)
  for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(graph.size()); ++s) {
    const auto v = static_cast<std::size_t>(s);
    const auto row = graph.neighbors(v).words();
    std::uint64_t sum = 0;
    for (std::size_t b = 0; b < planes.size(); ++b) {
      const auto plane = planes[b].words();
      std::uint64_t hits = 0;
      for (std::size_t k = 0; k < row.size(); ++k) hits += static_cast<std::uint64_t>(std::popcount(row[k] & plane[k]));
      sum += hits << b;
    }
    const auto [first, last] = graph.client_range(graph.vertex(v).client);
    weights[v] = (last - first) * sum;
  }
  return weights;
}

Clique greedy_clique(const IdncGraph& graph, std::span<const std::uint64_t> weights, const BitSet* eligible) {
  if (weights.size() != graph.size()) throw UsageError("greedy_clique: one weight per vertex");
  Clique clique;
  if (graph.empty()) return clique;
  std::vector<std::size_t> order(graph.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Vertex indices already follow (client, packet) order, so a stable sort
  // on weight alone realizes the tie-break.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });

  BitSet candidates(graph.size());
  if (eligible) candidates = *eligible;
  else candidates.set_all();
  for (std::size_t v : order) {
    if (!candidates.test(v)) continue;
    clique.vertices.push_back(v);
    candidates &= graph.neighbors(v);
  }
  for (std::size_t v : clique.vertices) {
    clique.packets.push_back(graph.vertex(v).packet);
    clique.clients.push_back(graph.vertex(v).client);
  }
  std::sort(clique.packets.begin(), clique.packets.end());
  clique.packets.erase(std::unique(clique.packets.begin(), clique.packets.end()), clique.packets.end());
  std::sort(clique.clients.begin(), clique.clients.end());
  return clique;
}

namespace reference {

namespace {

IdncGraph build_pairwise(std::span<const ClientState> states, std::optional<std::size_t> owner) {
  auto layout = collect_vertices(states);
  const std::size_t count = layout.vertices.size();
  std::vector<BitSet> adjacency(count, BitSet(count));
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = a + 1; b < count; ++b) {
      const Vertex x = layout.vertices[a];
      const Vertex y = layout.vertices[b];
      if (x.client == y.client) continue;
      bool edge = false;
      if (x.packet == y.packet) {
        edge = !owner || states[*owner].has.test(x.packet);
      } else if (states[y.client].has.test(x.packet) && states[x.client].has.test(y.packet)) {
        edge = !owner || (states[*owner].has.test(x.packet) && states[*owner].has.test(y.packet));
      }
      if (edge) {
        adjacency[a].set(b);
        adjacency[b].set(a);
      }
    }
  }
  return {std::move(layout.vertices), std::move(layout.offsets), std::move(adjacency),
          owner ? GraphScope::local : GraphScope::global, owner};
}

}  // namespace

IdncGraph build_global(std::span<const ClientState> states) { return build_pairwise(states, std::nullopt); }

IdncGraph build_local(std::span<const ClientState> states, std::size_t u) {
  if (u >= states.size()) throw UsageError("local graph owner out of range");
  return build_pairwise(states, u);
}

std::vector<std::uint64_t> compute_weights(const IdncGraph& graph, std::span<const ClientState> states) {
  std::vector<std::uint64_t> weights(graph.size(), 0);
  for (std::size_t v = 0; v < graph.size(); ++v) {
    std::uint64_t sum = 0;
    graph.neighbors(v).for_each([&](std::size_t nb) { sum += states[graph.vertex(nb).client].want_count(); });
    weights[v] = states[graph.vertex(v).client].want_count() * sum;
  }
  return weights;
}

}  // namespace reference

}  // namespace nclab
