// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include "pcup/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "pcup/error.hpp"
#include "pcup/sampling.hpp"

namespace pcup {

void PartitionConfig::validate() const {
  if (patch_size < 8) fail(Errc::InvalidArgument, "patch size must be >= 8");
  if (!(overlap >= 1.0) || !std::isfinite(overlap)) {
    fail(Errc::InvalidArgument, "overlap ratio must be >= 1");
  }
  if (rate < 1) fail(Errc::InvalidArgument, "rate must be >= 1");
}

std::size_t patch_count(std::size_t n, double overlap, std::size_t patch_size) {
  if (patch_size == 0) fail(Errc::InvalidArgument, "patch size must be positive");
  if (n < patch_size) {
    fail(Errc::PatchLargerThanCloud, "cloud of " + std::to_string(n) +
                                         " points is smaller than patch size " +
                                         std::to_string(patch_size));
  }
  const double raw = std::ceil(double(n) * overlap / double(patch_size));
  return std::max<std::size_t>(std::size_t(raw), 1);
}

std::vector<Patch> partition(const ColoredPointCloud& cloud, const PartitionConfig& cfg) {
  cfg.validate();
  cloud.validate();
  const std::size_t count = patch_count(cloud.size(), cfg.overlap, cfg.patch_size);
  if (cfg.fps_start >= cloud.size()) fail(Errc::InvalidArgument, "fps_start out of range");

  const auto seeds = farthest_point_sample(cloud.positions, count, cfg.fps_start);
  const SpatialIndex index(cloud.positions);
  const KnnTable table = knn_batch(index, [&] {
    std::vector<Vec3> q(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) q[i] = cloud.positions[seeds[i]];
    return q;
  }(), cfg.patch_size);

  std::vector<Patch> patches(seeds.size());
  const auto np = std::int64_t(seeds.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < np; ++i) {
    Patch& p = patches[i];
    p.seed_index = seeds[i];
    const auto row = table.row(std::size_t(i));
    p.source_indices.assign(row.begin(), row.end());
    p.cloud = cloud.subset(p.source_indices);
  }
  return patches;
}

TrainingPair extract_training_pair(const ColoredPointCloud& dense, const SpatialIndex& index,
                                   std::size_t seed, const PartitionConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::size_t want = cfg.patch_size * std::size_t(cfg.rate);
  if (dense.size() < want) {
    fail(Errc::CloudTooSmall, "ground truth has " + std::to_string(dense.size()) +
                                  " points, training pair needs " + std::to_string(want));
  }
  if (index.size() != dense.size()) fail(Errc::DimensionMismatch, "index/cloud size mismatch");
  if (seed >= dense.size()) fail(Errc::InvalidArgument, "seed index out of range");

  const NeighborSet nn = index.knn(dense.positions[seed], want);
  TrainingPair pair;
  pair.dense = dense.subset(nn.indices);
  pair.sparse.seed_index = 0;
  pair.sparse.source_indices = random_downsample_indices(want, double(cfg.rate), rng);
  pair.sparse.cloud = pair.dense.subset(pair.sparse.source_indices);
  return pair;
}

TrainingPair extract_training_pair(const ColoredPointCloud& dense, std::size_t seed,
                                   const PartitionConfig& cfg, Rng& rng) {
  dense.validate();
  const SpatialIndex index(dense.positions);
  return extract_training_pair(dense, index, seed, cfg, rng);
}

ColoredPointCloud regroup(std::span<const ColoredPointCloud> patches, std::size_t target_count,
                          std::size_t fps_start) {
  ColoredPointCloud all = concatenate(patches);
  if (all.size() < target_count || target_count == 0) {
    fail(Errc::InsufficientPoints, "patches hold " + std::to_string(all.size()) +
                                       " points, target is " + std::to_string(target_count));
  }
  auto chosen = farthest_point_sample(all.positions, target_count, fps_start);
  std::sort(chosen.begin(), chosen.end());
  return all.subset(chosen);
}

}  // namespace pcup
