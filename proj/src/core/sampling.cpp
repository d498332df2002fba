// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include "pcup/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "pcup/error.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pcup {
namespace {

void check_fps_args(std::span<const Vec3> positions, std::size_t count, std::size_t start) {
  check_positions(positions);
  if (count == 0) fail(Errc::InvalidArgument, "FPS count must be positive");
  if (count > positions.size()) {
    fail(Errc::CountTooLarge, "FPS count " + std::to_string(count) + " exceeds " +
                                  std::to_string(positions.size()) + " points");
  }
  if (start >= positions.size()) fail(Errc::InvalidArgument, "FPS start index out of range");
}

}  // namespace

std::vector<std::size_t> farthest_point_sample(std::span<const Vec3> positions, std::size_t count,
                                               std::size_t start) {
  check_fps_args(positions, count, start);
  const auto n = std::int64_t(positions.size());

  // Structure-of-arrays copy keeps the inner loop vectorizable.
  std::vector<float> xs(n), ys(n), zs(n);
  for (std::int64_t i = 0; i < n; ++i) {
    xs[i] = positions[i].x();
    ys[i] = positions[i].y();
    zs[i] = positions[i].z();
  }
  std::vector<float> min_d2(n, std::numeric_limits<float>::infinity());
  std::vector<std::size_t> selected;
  selected.reserve(count);
  std::int64_t last = std::int64_t(start);
  selected.push_back(start);
  min_d2[last] = -1.0f;  // selected marker

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::vector<float> partial_max(static_cast<std::size_t>(threads), -2.0f);
  std::vector<std::int64_t> partial_idx(static_cast<std::size_t>(threads));
  float* md = min_d2.data();
  const float* px = xs.data();
  const float* py = ys.data();
  const float* pz = zs.data();

  // Selected points hold -1, which min() never raises. Pass one updates and
  // finds the maximum; pass two finds its first index.
  while (selected.size() < count) {
    const float lx = px[last], ly = py[last], lz = pz[last];
    float gmax = -2.0f;
    std::fill(partial_max.begin(), partial_max.end(), -2.0f);
    std::fill(partial_idx.begin(), partial_idx.end(), n);
#pragma omp parallel num_threads(threads)
    {
      int tid = 0, team = 1;
#ifdef _OPENMP
      tid = omp_get_thread_num();
      team = omp_get_num_threads();
#endif
      const std::int64_t lo = n * tid / team, hi = n * (tid + 1) / team;
      float local = -2.0f;
#pragma omp simd reduction(max : local)
      for (std::int64_t i = lo; i < hi; ++i) {
        const float dx = lx - px[i];
        const float dy = ly - py[i];
        const float dz = lz - pz[i];
        const float d2 = dx * dx + dy * dy + dz * dz;
        const float cur = d2 < md[i] ? d2 : md[i];
        md[i] = cur;
        local = local > cur ? local : cur;
      }
      partial_max[std::size_t(tid)] = local;
#pragma omp barrier
#pragma omp single
      {
        for (float v : partial_max) gmax = std::max(gmax, v);
      }
      for (std::int64_t i = lo; i < hi; ++i) {
        if (md[i] == gmax) {
          partial_idx[std::size_t(tid)] = i;
          break;
        }
      }
    }
    last = *std::min_element(partial_idx.begin(), partial_idx.end());
    md[last] = -1.0f;
    selected.push_back(std::size_t(last));
  }
  return selected;
}

std::vector<std::size_t> random_downsample_indices(std::size_t n, double rate, Rng& rng) {
  if (!(rate >= 1.0) || !std::isfinite(rate)) {
    fail(Errc::InvalidArgument, "down-sampling rate must be a finite value >= 1");
  }
  const auto keep = std::size_t(std::floor(double(n) / rate));
  if (keep < 1) {
    fail(Errc::RateTooLarge, "rate " + std::to_string(rate) + " leaves no points out of " +
                                 std::to_string(n));
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  // Partial Fisher-Yates: the first `keep` slots become a uniform sample.
  for (std::size_t i = 0; i < keep; ++i) {
    const std::size_t j = i + rng.below(n - i);
    std::swap(perm[i], perm[j]);
  }
  perm.resize(keep);
  std::sort(perm.begin(), perm.end());
  return perm;
}

ColoredPointCloud random_downsample(const ColoredPointCloud& cloud, double rate, Rng& rng) {
  cloud.validate();
  const auto idx = random_downsample_indices(cloud.size(), rate, rng);
  return cloud.subset(idx);
}

namespace serial {

std::vector<std::size_t> farthest_point_sample(std::span<const Vec3> positions, std::size_t count,
                                               std::size_t start) {
  check_fps_args(positions, count, start);
  const std::size_t n = positions.size();
  std::vector<float> min_d2(n, std::numeric_limits<float>::infinity());
  std::vector<bool> taken(n, false);
  std::vector<std::size_t> selected{start};
  taken[start] = true;
  std::size_t last = start;
  while (selected.size() < count) {
    std::size_t best = n;
    float best_d2 = -1.0f;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      min_d2[i] = std::min(min_d2[i], squared_distance(positions[last], positions[i]));
      if (min_d2[i] > best_d2) {
        best_d2 = min_d2[i];
        best = i;
      }
    }
    taken[best] = true;
    selected.push_back(best);
    last = best;
  }
  return selected;
}

}  // namespace serial
}  // namespace pcup
