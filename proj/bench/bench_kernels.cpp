// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

// Serial reference vs OpenMP kernel for each parallel hot path.

#include <benchmark/benchmark.h>

#include "pcup/coarse.hpp"
#include "pcup/kdtree.hpp"
#include "pcup/metrics.hpp"
#include "pcup/sampling.hpp"
#include "pcup/synthetic.hpp"

using namespace pcup;

namespace {

ColoredPointCloud fixture(std::size_t n, std::uint64_t seed) {
  Rng rng(RngSeed{seed});
  return synthetic::sphere(n, rng, synthetic::texture(0));
}

void BM_FpsSerial(benchmark::State& state) {
  const auto cloud = fixture(std::size_t(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(serial::farthest_point_sample(cloud.positions, 512));
}

void BM_FpsParallel(benchmark::State& state) {
  const auto cloud = fixture(std::size_t(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(farthest_point_sample(cloud.positions, 512));
}

void BM_KnnBruteForce(benchmark::State& state) {
  const auto cloud = fixture(std::size_t(state.range(0)), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(serial::brute_force_knn_batch(cloud.positions, cloud.positions, 16));
  }
}

void BM_KnnTreeBatch(benchmark::State& state) {
  const auto cloud = fixture(std::size_t(state.range(0)), 2);
  const SpatialIndex index(cloud.positions);
  for (auto _ : state) benchmark::DoNotOptimize(knn_batch(index, cloud.positions, 16));
}

void BM_GdwaiSerial(benchmark::State& state) {
  const auto dense = fixture(std::size_t(state.range(0)), 3);
  Rng rng(RngSeed{4});
  const auto sparse = random_downsample(dense, 4.0, rng);
  for (auto _ : state) benchmark::DoNotOptimize(serial::gdwai(dense.positions, sparse));
}

void BM_GdwaiParallel(benchmark::State& state) {
  const auto dense = fixture(std::size_t(state.range(0)), 3);
  Rng rng(RngSeed{4});
  const auto sparse = random_downsample(dense, 4.0, rng);
  for (auto _ : state) benchmark::DoNotOptimize(gdwai(dense.positions, sparse));
}

void BM_ChamferSerial(benchmark::State& state) {
  const auto a = fixture(std::size_t(state.range(0)), 5), b = fixture(std::size_t(state.range(0)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(serial::chamfer(a.positions, b.positions));
}

void BM_ChamferParallel(benchmark::State& state) {
  const auto a = fixture(std::size_t(state.range(0)), 5), b = fixture(std::size_t(state.range(0)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(chamfer(a.positions, b.positions));
}

void BM_P2fSerial(benchmark::State& state) {
  const auto a = fixture(std::size_t(state.range(0)), 5), b = fixture(std::size_t(state.range(0)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(serial::p2f(a.positions, b.positions));
}

void BM_P2fParallel(benchmark::State& state) {
  const auto a = fixture(std::size_t(state.range(0)), 5), b = fixture(std::size_t(state.range(0)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(p2f(a.positions, b.positions));
}

void BM_PsnrSerial(benchmark::State& state) {
  const auto a = fixture(std::size_t(state.range(0)), 5), b = fixture(std::size_t(state.range(0)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(serial::attribute_psnr(a, b));
}

void BM_PsnrParallel(benchmark::State& state) {
  const auto a = fixture(std::size_t(state.range(0)), 5), b = fixture(std::size_t(state.range(0)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(attribute_psnr(a, b));
}

}  // namespace

BENCHMARK(BM_FpsSerial)->Arg(16384)->Arg(65536)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FpsParallel)->Arg(16384)->Arg(65536)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KnnBruteForce)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KnnTreeBatch)->Arg(4096)->Arg(65536)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GdwaiSerial)->Arg(16384)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GdwaiParallel)->Arg(16384)->Arg(65536)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChamferSerial)->Arg(65536)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChamferParallel)->Arg(65536)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_P2fSerial)->Arg(16384)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_P2fParallel)->Arg(16384)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PsnrSerial)->Arg(65536)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PsnrParallel)->Arg(65536)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
