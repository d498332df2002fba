// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PCUP_PARTITION_HPP
#define PCUP_PARTITION_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "pcup/cloud.hpp"
#include "pcup/kdtree.hpp"
#include "pcup/rng.hpp"

namespace pcup {

struct PartitionConfig {
  std::size_t patch_size = 256;  // m
  double overlap = 3.0;          // c
  int rate = 4;                  // R
  std::size_t fps_start = 0;

  /// m >= 8, c >= 1, R >= 1 (R == 1 is accepted as a degenerate test case).
  void validate() const;
};

/// A fixed-size neighborhood of a parent cloud.
struct Patch {
  ColoredPointCloud cloud;
  std::size_t seed_index = 0;                // into the parent
  std::vector<std::size_t> source_indices;  // into the parent, nearest-first
};

/// Sparse patch plus its m*R-point ground truth. For a pair,
/// `sparse.source_indices` index into `dense`.
struct TrainingPair {
  Patch sparse;
  ColoredPointCloud dense;
};

/// max(ceil(n*c/m), 1). Throws PatchLargerThanCloud if n < m.
std::size_t patch_count(std::size_t n, double overlap, std::size_t patch_size);

/// FPS seeds, then the m nearest cloud points of each seed. Patches are
/// built in parallel; output order follows the FPS order.
std::vector<Patch> partition(const ColoredPointCloud& cloud, const PartitionConfig& cfg);

/// Dense half: the m*R nearest ground-truth points to `seed`. Sparse half:
/// a uniform 1/R subset of it. Throws CloudTooSmall if dense has fewer
/// than m*R points.
TrainingPair extract_training_pair(const ColoredPointCloud& dense, const SpatialIndex& index,
                                   std::size_t seed, const PartitionConfig& cfg, Rng& rng);

TrainingPair extract_training_pair(const ColoredPointCloud& dense, std::size_t seed,
                                   const PartitionConfig& cfg, Rng& rng);

/// Concatenate all patches and farthest-point-sample exactly `target_count`
/// points from the union (output in concatenation order). Throws
/// InsufficientPoints when the union is smaller than the target.
ColoredPointCloud regroup(std::span<const ColoredPointCloud> patches, std::size_t target_count,
                          std::size_t fps_start = 0);

}  // namespace pcup

#endif  // PCUP_PARTITION_HPP
