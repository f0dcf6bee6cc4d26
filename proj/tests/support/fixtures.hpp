#pragma once

// Small builders shared by the unit tests.

#include <initializer_list>
#include <vector>

#include "nclab/bitset.hpp"
#include "nclab/channel.hpp"

namespace fixtures {

// 1-based ids, as written in the examples.
inline nclab::BitSet set_of(std::size_t n, std::initializer_list<std::size_t> ids) {
  nclab::BitSet s(n);
  for (std::size_t id : ids) s.set(id - 1);
  return s;
}

inline nclab::ClientState client(std::size_t id, nclab::BitSet has, nclab::BitSet required) {
  nclab::ClientState s;
  s.id = id;
  s.has = std::move(has);
  s.required = std::move(required);
  return s;
}

// The four-client example: Gamma_i = three consecutive packets, R_i = all but p_i.
inline std::vector<nclab::ClientState> intro_states() {
  return {client(0, set_of(4, {1, 2, 3}), set_of(4, {2, 3, 4})), client(1, set_of(4, {2, 3, 4}), set_of(4, {1, 3, 4})),
          client(2, set_of(4, {3, 4, 1}), set_of(4, {1, 2, 4})), client(3, set_of(4, {4, 1, 2}), set_of(4, {1, 2, 3}))};
}

}  // namespace fixtures

#include "nclab/rng.hpp"

namespace fixtures {

// Random has and required sets.
inline std::vector<nclab::ClientState> random_states(std::size_t clients, std::size_t packets, double hold,
                                                     double need, nclab::Rng& rng) {
  std::vector<nclab::ClientState> out;
  for (std::size_t i = 0; i < clients; ++i) {
    nclab::BitSet has(packets), req(packets);
    for (std::size_t j = 0; j < packets; ++j) {
      if (rng.bernoulli(hold)) has.set(j);
      if (rng.bernoulli(need)) req.set(j);
    }
    out.push_back(client(i, has, req));
  }
  return out;
}

}  // namespace fixtures
