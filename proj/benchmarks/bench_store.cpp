#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "dsr/content_store.hpp"

namespace {

namespace fs = std::filesystem;

struct StoreEnv {
  fs::path root;
  dsr::ContentStore store;

  StoreEnv()
      : root(fs::temp_directory_path() /
             ("dsr_bench_" + std::to_string(::getpid()))),
        store(root, dsr::ChunkParams{64 << 10, 256 << 10, 1 << 20}) {}
  ~StoreEnv() {
    std::error_code ec;
    fs::remove_all(root, ec);
  }
};

std::string random_bytes(size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::string out(n, '\0');
  for (auto& c : out) c = char(rng());
  return out;
}

void BM_PutBlobFresh(benchmark::State& state) {
  StoreEnv env;
  uint64_t seed = 0;
  for (auto _ : state) {
    state.PauseTiming();
    std::string data = random_bytes(size_t(state.range(0)), ++seed);
    state.ResumeTiming();
    auto result = env.store.put_blob(data);
    benchmark::DoNotOptimize(result);
  }
  state.SetBytesProcessed(int64_t(state.iterations()) * state.range(0));
}
BENCHMARK(BM_PutBlobFresh)->Arg(1 << 20)->Arg(8 << 20);

void BM_PutBlobDeduped(benchmark::State& state) {
  StoreEnv env;
  std::string data = random_bytes(size_t(state.range(0)), 99);
  env.store.put_blob(data);
  for (auto _ : state) {
    auto result = env.store.put_blob(data);
    benchmark::DoNotOptimize(result);
  }
  state.SetBytesProcessed(int64_t(state.iterations()) * state.range(0));
}
BENCHMARK(BM_PutBlobDeduped)->Arg(8 << 20);

void BM_GetBlob(benchmark::State& state) {
  StoreEnv env;
  std::string data = random_bytes(size_t(state.range(0)), 7);
  auto put = env.store.put_blob(data);
  for (auto _ : state) {
    std::string out = env.store.get_blob(put.entry);
    benchmark::DoNotOptimize(out);
  }
  state.SetBytesProcessed(int64_t(state.iterations()) * state.range(0));
}
BENCHMARK(BM_GetBlob)->Arg(8 << 20);

}  // namespace
