#include <benchmark/benchmark.h>

#include <random>

#include "dsr/chunker.hpp"
#include "dsr/sha256.hpp"

namespace {

std::string random_bytes(size_t n) {
  std::mt19937_64 rng(12345);
  std::string out(n, '\0');
  for (auto& c : out) c = char(rng());
  return out;
}

void BM_ChunkBoundaries(benchmark::State& state) {
  size_t avg = size_t(state.range(0));
  dsr::ChunkParams params{avg / 4, avg, avg * 4};
  std::string data = random_bytes(32 * 1024 * 1024);
  for (auto _ : state) {
    auto spans = dsr::chunk_boundaries(
        reinterpret_cast<const uint8_t*>(data.data()), data.size(), params);
    benchmark::DoNotOptimize(spans);
  }
  state.SetBytesProcessed(int64_t(state.iterations()) * int64_t(data.size()));
}
BENCHMARK(BM_ChunkBoundaries)->Arg(64 << 10)->Arg(256 << 10)->Arg(1 << 20);

void BM_Sha256(benchmark::State& state) {
  std::string data = random_bytes(8 * 1024 * 1024);
  for (auto _ : state) {
    auto d = dsr::sha256(data);
    benchmark::DoNotOptimize(d);
  }
  state.SetBytesProcessed(int64_t(state.iterations()) * int64_t(data.size()));
}
BENCHMARK(BM_Sha256);

}  // namespace
