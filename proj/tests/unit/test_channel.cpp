#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "nclab/analysis.hpp"
#include "nclab/channel.hpp"
#include "nclab/errors.hpp"

using namespace nclab;
using fixtures::set_of;

TEST_SUITE("channel") {

TEST_CASE("status matrix of the intro example") {
  const auto states = fixtures::intro_states();
  CHECK(states[0].wants() == set_of(4, {4}));
  CHECK(states[0].not_needed().none());
  const StatusMatrix s(states);
  CHECK(s.at(0, 3) == Status::wants);
  CHECK(s.at(0, 0) == Status::has);
  for (std::size_t i = 0; i < 4; ++i) {
    std::size_t counts[4] = {0, 0, 0, 0};
    for (std::size_t j = 0; j < 4; ++j) ++counts[static_cast<int>(s.at(i, j))];
    CHECK(counts[1] + counts[2] + counts[3] == 4);
  }
}

TEST_CASE("status partition") {
  auto full = fixtures::client(0, set_of(5, {1, 2, 3, 4, 5}), set_of(5, {2, 4}));
  CHECK(full.decoded());
  auto empty = fixtures::client(0, BitSet(5), set_of(5, {1, 3}));
  CHECK(empty.wants().count() == 2);
  CHECK(empty.not_needed().count() == 3);
  CHECK(empty.want_count() == 2);
  CHECK((empty.has & empty.wants()).none());
  CHECK((empty.wants() & empty.not_needed()).none());
  CHECK((empty.has | empty.wants() | empty.not_needed()).count() == 5);
}

TEST_CASE("centralized broadcast extremes and mean") {
  Rng rng(1);
  for (const auto& s : initial_broadcast_centralized(5, 7, 0.0, rng)) CHECK(s.count() == 7);
  for (const auto& s : initial_broadcast_centralized(5, 7, 1.0, rng)) CHECK(s.none());
  // Mean |Gamma_i| over 1000 seeds is binomial(20, 0.7): 14 +- 3 sigma.
  double total = 0;
  const int seeds = 1000;
  for (int k = 0; k < seeds; ++k) {
    Rng r(static_cast<std::uint64_t>(k));
    total += static_cast<double>(initial_broadcast_centralized(1, 20, 0.3, r)[0].count());
  }
  const double sigma = std::sqrt(20 * 0.3 * 0.7 / seeds);
  CHECK(std::abs(total / seeds - 14.0) < 3 * sigma);
}

TEST_CASE("cooperative seeding covers every packet") {
  Rng rng(2);
  const auto zero = initial_broadcast_cooperative(3, 6, 0.0, rng);
  CHECK(zero.transmissions == 6);
  for (const auto& s : zero.has) CHECK(s.count() == 6);
  for (double p : {0.2, 0.5, 0.9}) {
    for (int k = 0; k < 20; ++k) {
      const auto seeded = initial_broadcast_cooperative(4, 30, p, rng);
      BitSet all(30);
      for (const auto& s : seeded.has) all |= s;
      REQUIRE(all.count() == 30);
      REQUIRE(seeded.transmissions >= 30);
    }
  }
  CHECK_THROWS_AS(initial_broadcast_cooperative(3, 2, 1.0, rng), NonTermination);
  CHECK_THROWS_AS(initial_broadcast_cooperative(0, 2, 0.5, rng), UsageError);
}

TEST_CASE("cooperative seeding marginal") {
  Rng rng(3);
  const double p = 0.5;
  const std::size_t c = 3, packets = 20000;
  const auto seeded = initial_broadcast_cooperative(c, packets, p, rng);
  const double got = static_cast<double>(seeded.has[0].count()) / packets;
  const double want = 1.0 - p_eff(p, c);
  CHECK(std::abs(got - want) < 3 * std::sqrt(want * (1 - want) / packets));
}

TEST_CASE("deliver_round") {
  Rng rng(4);
  CHECK(deliver_round(std::nullopt, 6, 0.0, rng).count() == 6);
  CHECK(deliver_round(std::nullopt, 6, 1.0, rng).none());
  const auto r = deliver_round(std::size_t{2}, 6, 0.0, rng);
  CHECK(r.count() == 5);
  CHECK_FALSE(r.test(2));
}

TEST_CASE("build_status copies payloads of held packets") {
  auto f = make_field(FieldSpec::prime(7));
  const DecodingMatrix a(f, 2, {0, 2, 3, 0});
  const std::vector<Packet> packets{{0, {1}}, {1, {2}}};
  const std::vector<BitSet> has{set_of(2, {2}), BitSet(2)};
  const auto states = build_status(a, has, packets, 2);
  CHECK(states[0].buffer.contains(1));
  CHECK_FALSE(states[0].buffer.contains(0));
  CHECK(states[0].listens == 2);
  CHECK(states[0].required == set_of(2, {2}));
  CHECK(states[1].required == set_of(2, {1}));
  CHECK(StatusMatrix(states).at(1, 1) == Status::not_needed);
}

TEST_CASE("channel parameters") {
  CHECK_NOTHROW((ChannelParams{0.3, 0.1}.validate()));
  CHECK_THROWS_AS((ChannelParams{1.3, 0.1}.validate()), UsageError);
  CHECK_THROWS_AS((ChannelParams{0.3, -0.1}.validate()), UsageError);
}

}
