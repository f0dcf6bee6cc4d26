#include <doctest.h>

#include <sstream>

#include "nclab/codec.hpp"
#include "nclab/errors.hpp"
#include "oracle/oracle.hpp"

using namespace nclab;

namespace {

oracle::Field oracle_field(const FieldSpec& spec) {
  if (spec.kind == FieldKind::prime) return {spec.order, 0, 0};
  return {spec.order, spec.degree, spec.polynomial};
}

PacketBuffer full_buffer(const std::vector<Packet>& packets) {
  PacketBuffer b(packets.size());
  for (const auto& p : packets) b.put(p.id, p.payload);
  return b;
}

std::vector<std::vector<std::uint32_t>> payloads(const std::vector<Packet>& ps) {
  std::vector<std::vector<std::uint32_t>> out;
  for (const auto& p : ps) out.push_back(p.payload);
  return out;
}

std::vector<std::vector<std::uint32_t>> payloads(const std::vector<Message>& ms) {
  std::vector<std::vector<std::uint32_t>> out;
  for (const auto& m : ms) out.push_back(m.payload);
  return out;
}

}  // namespace

TEST_SUITE("codec") {

TEST_CASE("identity and diagonal encodes") {
  auto f5 = make_field(FieldSpec::prime(5));
  const DecodingMatrix diag(f5, 2, {2, 0, 0, 3});
  const std::vector<Message> x{{0, {4}}, {1, {1}}};
  const auto p = encode(diag, x);
  CHECK(p[0].payload == Payload{2});
  CHECK(p[1].payload == Payload{2});

  const DecodingMatrix id(f5, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  const std::vector<Message> y{{0, {1, 2}}, {1, {3, 4}}, {2, {0, 1}}};
  const auto py = encode(id, y);
  for (std::size_t i = 0; i < 3; ++i) CHECK(py[i].payload == y[i].payload);
}

TEST_CASE("matrix validation") {
  auto f = make_field(FieldSpec::prime(5));
  CHECK_THROWS_AS(DecodingMatrix(f, 2, {1, 0, 0}), UsageError);
  CHECK_THROWS_AS(DecodingMatrix(f, 2, {1, 0, 0, 0}), UsageError);    // zero row
  CHECK_THROWS_AS(DecodingMatrix(f, 2, {1, 1, 0, 1}), UsageError);    // uneven rate
  CHECK_THROWS_AS(DecodingMatrix(f, 2, {5, 0, 0, 1}), UsageError);    // not a field element
  const DecodingMatrix single(f, 1, {3});
  CHECK(single.rate() == 1);
  CHECK(!is_invertible(*f, 2, std::vector<Symbol>{1, 1, 1, 1}));
  CHECK(is_invertible(*f, 2, std::vector<Symbol>{1, 1, 1, 2}));
}

TEST_CASE("generated matrices") {
  Rng rng(7);
  auto f = make_field(FieldSpec::binary(8));
  const auto one = generate_keyed_matrix(1, 1, f, rng);
  CHECK(one.matrix.at(0, 0) != 0);
  CHECK_THROWS_AS(generate_keyed_matrix(4, 5, f, rng), UsageError);
  auto f5 = make_field(FieldSpec::prime(5));
  CHECK_THROWS_AS(generate_keyed_matrix(8, 5, f5, rng), UsageError);

  // With r = n = q-1 every row holds each nonzero element once, so every row
  // sums to zero and A is singular; a larger field is needed for full rows.
  CHECK_THROWS_AS(generate_keyed_matrix(4, 4, make_field(FieldSpec::prime(5)), rng), GenerationFailure);
  const auto full = generate_keyed_matrix(4, 4, make_field(FieldSpec::prime(257)), rng);
  const auto e = full.matrix.entries();
  CHECK(oracle::rank({257, 0, 0}, 4, 4, std::vector<std::uint32_t>(e.begin(), e.end())) == 4);

  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng.below(24);
    const std::size_t r = 1 + rng.below(n);
    const auto km = generate_keyed_matrix(n, r, f, rng);
    const auto ent = km.matrix.entries();
    REQUIRE(oracle::rank(oracle_field(f->spec()), n, n, std::vector<std::uint32_t>(ent.begin(), ent.end())) == n);
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(km.matrix.support(i).size() == r);
      REQUIRE(std::vector<Symbol>(km.matrix.row(i).begin(), km.matrix.row(i).end()) ==
              derive_row(km.keys[i], km.pub, n));
    }
  }
}

TEST_CASE("round trip through encode and decode") {
  Rng rng(8);
  for (const auto& spec : {FieldSpec::binary(8), FieldSpec::prime(257), FieldSpec::binary(16)}) {
    auto f = make_field(spec);
    for (int trial = 0; trial < 25; ++trial) {
      const std::size_t n = 1 + rng.below(32);
      const std::size_t r = 1 + rng.below(n);
      const auto km = generate_keyed_matrix(n, r, f, rng);
      const auto x = random_messages(n, 5, *f, rng);
      const auto p = encode(km.matrix, x);
      REQUIRE(p.size() == n);
      const auto ent = km.matrix.entries();
      REQUIRE(oracle::exhaustive_decode_check(oracle_field(spec), n, std::vector<std::uint32_t>(ent.begin(), ent.end()),
                                              payloads(p), payloads(x)));
      const auto buffer = full_buffer(p);
      for (std::size_t i = 0; i < n; ++i) REQUIRE(decode_client(km.matrix, i, buffer).payload == x[i].payload);
    }
  }
}

TEST_CASE("parallel and serial encoders agree") {
  Rng rng(9);
  auto f = make_field(FieldSpec::binary(8));
  const auto km = generate_keyed_matrix(24, 6, f, rng);
  const auto x = random_messages(24, 3000, *f, rng);
  const auto a = encode(km.matrix, x);
  const auto b = encode_serial(km.matrix, x);
  for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i].payload == b[i].payload);
}

TEST_CASE("partial decoding needs exactly the support") {
  Rng rng(10);
  auto f = make_field(FieldSpec::prime(257));
  const auto km = generate_keyed_matrix(12, 4, f, rng);
  const auto x = random_messages(12, 4, *f, rng);
  const auto p = encode(km.matrix, x);
  for (std::size_t i = 0; i < 12; ++i) {
    PacketBuffer just(12);
    for (std::size_t j : km.matrix.support(i)) just.put(j, p[j].payload);
    CHECK(decode_client(km.matrix, i, just).payload == x[i].payload);
    for (std::size_t j : km.matrix.support(i)) {
      PacketBuffer less = just;
      less.erase(j);
      CHECK_THROWS_AS(decode_client(km.matrix, i, less), NotYetDecodable);
    }
  }
}

TEST_CASE("r = 1 returns the packet itself when the coefficient is one") {
  auto f = make_field(FieldSpec::prime(7));
  const DecodingMatrix a(f, 2, {0, 1, 1, 0});
  PacketBuffer b(2);
  b.put(1, {3, 4});
  CHECK(decode_client(a, 0, b).payload == Payload{3, 4});
}

TEST_CASE("corrupting a packet is caught by the oracle") {
  Rng rng(12);
  auto f = make_field(FieldSpec::binary(8));
  const auto km = generate_keyed_matrix(8, 3, f, rng);
  const auto x = random_messages(8, 4, *f, rng);
  auto p = payloads(encode(km.matrix, x));
  const auto ent = km.matrix.entries();
  const std::vector<std::uint32_t> a(ent.begin(), ent.end());
  CHECK(oracle::exhaustive_decode_check({256, 8, 0x11B}, 8, a, p, payloads(x)));
  p[3][1] ^= 1;
  CHECK_FALSE(oracle::exhaustive_decode_check({256, 8, 0x11B}, 8, a, p, payloads(x)));
}

TEST_CASE("instance files round trip") {
  const auto inst = make_instance(6, 3, FieldSpec::prime(257), 4, 99);
  std::stringstream text;
  write_instance(text, inst);
  const auto back = read_instance(text);
  CHECK(back.n == 6);
  CHECK(back.r == 3);
  CHECK(back.seed == 99);
  CHECK(back.field == inst.field);
  CHECK(back.matrix == inst.matrix);
  CHECK(back.packets == inst.packets);
  CHECK(back.messages == inst.messages);

  std::stringstream bad("nclab-instance 1\nfield gf256\nn x\n");
  CHECK_THROWS_AS(read_instance(bad), UsageError);
}

}
