// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PCUP_PIPELINE_HPP
#define PCUP_PIPELINE_HPP

#include <cstddef>
#include <vector>

#include "pcup/cloud.hpp"
#include "pcup/coarse.hpp"
#include "pcup/nn/networks.hpp"
#include "pcup/nn/parameters.hpp"
#include "pcup/partition.hpp"
#include "pcup/rng.hpp"

namespace pcup {

struct UpsampleOptions {
  PartitionConfig partition;
  std::size_t k1 = 2;  // interpolation neighbors when no model is given
  /// Learned attribute stage; null means interpolation only.
  const nn::ParameterStore* params = nullptr;
  nn::ModelSpec spec;
  RngSeed seed;
};

struct UpsampleResult {
  ColoredPointCloud cloud;
  std::size_t patches = 0;
  std::size_t candidates = 0;  // points before regrouping
};

/// Partition, per-patch geometry and attribute up-sampling (parallel over
/// patches, one rng stream per patch), then regroup to exactly n*R points.
/// The result does not depend on the thread count.
UpsampleResult upsample_cloud(const ColoredPointCloud& input, const GeometryUpsampler& geometry,
                              const UpsampleOptions& options);

/// `count` training pairs around FPS seeds of a ground-truth cloud
/// (count == 0: one per m*R points, at least one). Throws CloudTooSmall if
/// the cloud has fewer than m*R points.
std::vector<TrainingPair> sample_training_pairs(const ColoredPointCloud& ground_truth,
                                                const PartitionConfig& cfg, std::size_t count,
                                                Rng& rng);

}  // namespace pcup

#endif  // PCUP_PIPELINE_HPP
