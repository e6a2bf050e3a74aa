// Microbenchmarks comparing the parallel kernels against their serial
// reference paths, plus the end-to-end pipeline.
#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "sketchgen/embedding.hpp"
#include "sketchgen/metrics.hpp"
#include "sketchgen/pipeline.hpp"
#include "sketchgen/procedural.hpp"
#include "sketchgen/rng.hpp"
#include "sketchgen/tokenizer.hpp"

namespace {

using namespace sketchgen;

std::vector<Vec3> random_cloud(uint64_t seed, size_t n) {
  Rng rng(seed);
  std::vector<Vec3> pts(n);
  for (auto& p : pts) p = {rng.uniform(), rng.uniform(), rng.uniform()};
  return pts;
}

TokenSequence bench_tokens() {
  Rng rng(5);
  Sketch s;
  for (int i = 0; i < 64; ++i) {
    Stroke st;
    st.id = i;
    for (int p = 0; p < 32; ++p)
      st.points.push_back({rng.uniform(), rng.uniform(), rng.uniform()});
    s.strokes.push_back(std::move(st));
  }
  return tokenize(s);
}

void BM_ChamferBrute(benchmark::State& state) {
  size_t n = static_cast<size_t>(state.range(0));
  auto a = random_cloud(1, n), b = random_cloud(2, n);
  for (auto _ : state) benchmark::DoNotOptimize(chamfer(a, b, NnBackend::BruteForce));
}
BENCHMARK(BM_ChamferBrute)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_ChamferKdTree(benchmark::State& state) {
  size_t n = static_cast<size_t>(state.range(0));
  auto a = random_cloud(1, n), b = random_cloud(2, n);
  for (auto _ : state) benchmark::DoNotOptimize(chamfer(a, b, NnBackend::KdTree));
}
BENCHMARK(BM_ChamferKdTree)->Arg(1024)->Arg(4096)->Arg(16384)->Unit(benchmark::kMillisecond);

void BM_EmbedSerial(benchmark::State& state) {
  TokenSequence seq = bench_tokens();
  EmbeddingConfig cfg = EmbeddingConfig::reference();
  for (auto _ : state) benchmark::DoNotOptimize(embed(seq, cfg, false));
}
BENCHMARK(BM_EmbedSerial)->Unit(benchmark::kMillisecond);

void BM_EmbedParallel(benchmark::State& state) {
  TokenSequence seq = bench_tokens();
  EmbeddingConfig cfg = EmbeddingConfig::reference();
  for (auto _ : state) benchmark::DoNotOptimize(embed(seq, cfg, true));
}
BENCHMARK(BM_EmbedParallel)->Unit(benchmark::kMillisecond);

void BM_Pipeline(benchmark::State& state) {
  TriMesh table = make_table();
  for (auto _ : state)
    benchmark::DoNotOptimize(generate_sketch(table, "table", PipelineParams{}, 7));
}
BENCHMARK(BM_Pipeline)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
