#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nclab/bitset.hpp"
#include "nclab/channel.hpp"

namespace nclab {

/// v_ij: client i (index into the state list) still wants packet j.
struct Vertex {
  std::uint32_t client = 0;
  std::uint32_t packet = 0;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

enum class GraphScope { global, local };

/// IDNC conflict graph. Vertices are ordered by (client, packet); adjacency
/// is one bit row per vertex. A clique is a set of (client, packet) demands
/// that one XOR/field-sum of the packets serves at once.
class IdncGraph {
 public:
  IdncGraph() = default;
  IdncGraph(std::vector<Vertex> vertices, std::vector<std::size_t> client_offsets, std::vector<BitSet> adjacency,
            GraphScope scope, std::optional<std::size_t> owner);

  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  std::size_t clients() const { return client_offsets_.empty() ? 0 : client_offsets_.size() - 1; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const Vertex& vertex(std::size_t v) const { return vertices_[v]; }
  const BitSet& neighbors(std::size_t v) const { return adjacency_[v]; }
  bool adjacent(std::size_t a, std::size_t b) const { return adjacency_[a].test(b); }
  std::size_t edge_count() const;

  // Vertex index range [first, last) owned by client i.
  std::pair<std::size_t, std::size_t> client_range(std::size_t client) const {
    return {client_offsets_[client], client_offsets_[client + 1]};
  }
  std::optional<std::size_t> find(Vertex v) const;

  GraphScope scope() const { return scope_; }
  // The client u of a local graph G_u.
  std::optional<std::size_t> owner() const { return owner_; }

  bool is_clique(std::span<const std::size_t> members) const;
  bool is_subgraph_of(const IdncGraph& other) const;

  /// Edge list text: a header line, one "v" line per vertex (1-based client
  /// and packet ids, optional weight) and one "e" line per edge.
  void write_edge_list(std::ostream& out, std::span<const std::uint64_t> weights = {}) const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<std::size_t> client_offsets_;
  std::vector<BitSet> adjacency_;
  GraphScope scope_ = GraphScope::global;
  std::optional<std::size_t> owner_;
};

/// G(V, E): v_ij ~ v_kl (i != k) when j == l, or when p_j in Gamma_k and
/// p_l in Gamma_i. Rows are built in parallel for large graphs.
IdncGraph build_global(std::span<const ClientState> states);

/// G_u(V, E_u): same vertices, keeping only edges whose packets u holds.
IdncGraph build_local(std::span<const ClientState> states, std::size_t u);
// Derives G_u from an already built G over the same states.
IdncGraph restrict_to_holder(const IdncGraph& global, const BitSet& holder_has, std::size_t u);

/// w_ij = |Omega_i| * sum over neighbours v_ts of |Omega_t|, in the graph's
/// own edge set.
std::vector<std::uint64_t> compute_weights(const IdncGraph& graph, std::span<const ClientState> states);

struct Clique {
  std::vector<std::size_t> vertices;  // in acceptance order
  std::vector<std::size_t> packets;   // sorted, distinct
  std::vector<std::size_t> clients;   // sorted

  std::size_t size() const { return vertices.size(); }
  bool empty() const { return vertices.empty(); }
};

/// Scans vertices by nonincreasing weight (ties: lower client, then lower
/// packet) and keeps each one adjacent to everything kept so far. When
/// `eligible` is given, only those vertices are considered.
Clique greedy_clique(const IdncGraph& graph, std::span<const std::uint64_t> weights, const BitSet* eligible = nullptr);

/// Vertices whose packet is in `has`; the ones a holder can put into a combination.
BitSet servable_vertices(const IdncGraph& graph, const BitSet& has);

/// Serial pairwise-rule implementations kept as references for tests and
/// the benchmark.
namespace reference {
IdncGraph build_global(std::span<const ClientState> states);
IdncGraph build_local(std::span<const ClientState> states, std::size_t u);
std::vector<std::uint64_t> compute_weights(const IdncGraph& graph, std::span<const ClientState> states);
}  // namespace reference

}  // namespace nclab
