// Parallel kernels against their serial references. Run with
// OMP_NUM_THREADS set to compare scaling.

#include <benchmark/benchmark.h>

#include "nclab/channel.hpp"
#include "nclab/codec.hpp"
#include "nclab/idnc.hpp"

using namespace nclab;

namespace {

// States after the first broadcast of an n-client instance.
std::vector<ClientState> broadcast_states(std::size_t n, std::size_t r, double p) {
  Rng rng(derive_seed(99, n, r));
  const auto keyed = generate_keyed_matrix(n, r, make_field(FieldSpec::binary(8)), rng);
  return build_status(keyed.matrix, initial_broadcast_centralized(n, n, p, rng));
}

void BM_BuildGlobal(benchmark::State& st) {
  const auto states = broadcast_states(st.range(0), st.range(0) * 3 / 5, 0.3);
  for (auto _ : st) benchmark::DoNotOptimize(build_global(states));
}

void BM_BuildGlobalReference(benchmark::State& st) {
  const auto states = broadcast_states(st.range(0), st.range(0) * 3 / 5, 0.3);
  for (auto _ : st) benchmark::DoNotOptimize(reference::build_global(states));
}

void BM_Weights(benchmark::State& st) {
  const auto states = broadcast_states(st.range(0), st.range(0) * 3 / 5, 0.3);
  const auto g = build_global(states);
  for (auto _ : st) benchmark::DoNotOptimize(compute_weights(g, states));
}

void BM_WeightsReference(benchmark::State& st) {
  const auto states = broadcast_states(st.range(0), st.range(0) * 3 / 5, 0.3);
  const auto g = build_global(states);
  for (auto _ : st) benchmark::DoNotOptimize(reference::compute_weights(g, states));
}

struct EncodeInput {
  std::optional<KeyedMatrix> keyed;
  std::vector<Message> messages;
};

EncodeInput encode_input(std::size_t n, std::size_t m_len) {
  Rng rng(derive_seed(98, n, m_len));
  const auto field = make_field(FieldSpec::binary(8));
  EncodeInput in;
  in.keyed.emplace(generate_keyed_matrix(n, n / 2, field, rng));
  in.messages = random_messages(n, m_len, *field, rng);
  return in;
}

void BM_Encode(benchmark::State& st) {
  const auto in = encode_input(st.range(0), st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(encode(in.keyed->matrix, in.messages));
}

void BM_EncodeSerial(benchmark::State& st) {
  const auto in = encode_input(st.range(0), st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(encode_serial(in.keyed->matrix, in.messages));
}

}  // namespace

BENCHMARK(BM_BuildGlobal)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BuildGlobalReference)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Weights)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_WeightsReference)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Encode)->Args({64, 1024})->Args({128, 4096})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EncodeSerial)->Args({64, 1024})->Args({128, 4096})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
