// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include "pcup/pipeline.hpp"

#include <algorithm>
#include <cstdint>
#include <exception>
#include <string>

#include "pcup/error.hpp"
#include "pcup/sampling.hpp"

namespace pcup {

UpsampleResult upsample_cloud(const ColoredPointCloud& input, const GeometryUpsampler& geometry,
                              const UpsampleOptions& options) {
  input.validate();
  options.partition.validate();
  const int rate = options.partition.rate;
  if (options.params) {
    if (!options.spec.learnable()) fail(Errc::InvalidArgument, "model has no learned stage");
    if (options.spec.net.rate != rate || options.spec.net.patch_size != options.partition.patch_size) {
      fail(Errc::IncompatibleCheckpoint, "model was built for a different rate or patch size");
    }
  }
  GdwaiConfig gcfg;
  gcfg.k1 = options.k1;
  gcfg.validate();

  const std::vector<Patch> patches = partition(input, options.partition);
  std::vector<ColoredPointCloud> outputs(patches.size());
  std::vector<std::exception_ptr> errors(patches.size());
  const auto count = std::int64_t(patches.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t p = 0; p < count; ++p) {
    try {
      const Patch& patch = patches[std::size_t(p)];
      Rng rng = Rng::derive(options.seed, std::uint64_t(p));
      std::vector<Vec3> dense = geometry.upsample(patch.cloud.positions, rate, rng);
      std::vector<Vec3> attributes =
          options.params ? nn::predict_attributes(*options.params, options.spec, patch.cloud, dense)
                         : gdwai(dense, patch.cloud, gcfg);
      for (Vec3& a : attributes) a = a.cwiseMax(0.0f).cwiseMin(1.0f);
      outputs[std::size_t(p)] = ColoredPointCloud(std::move(dense), std::move(attributes));
    } catch (...) {
      errors[std::size_t(p)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  UpsampleResult r;
  r.patches = patches.size();
  for (const auto& o : outputs) r.candidates += o.size();
  r.cloud = regroup(outputs, input.size() * std::size_t(rate), options.partition.fps_start);
  return r;
}

std::vector<TrainingPair> sample_training_pairs(const ColoredPointCloud& ground_truth,
                                                const PartitionConfig& cfg, std::size_t count,
                                                Rng& rng) {
  ground_truth.validate();
  cfg.validate();
  const std::size_t need = cfg.patch_size * std::size_t(cfg.rate);
  if (ground_truth.size() < need) {
    fail(Errc::CloudTooSmall, "training needs at least " + std::to_string(need) + " points, got " +
                                  std::to_string(ground_truth.size()));
  }
  if (count == 0) count = patch_count(ground_truth.size(), 1.0, need);
  count = std::min(count, ground_truth.size());
  const auto seeds = farthest_point_sample(ground_truth.positions, count, cfg.fps_start);
  const SpatialIndex index(ground_truth.positions);
  std::vector<TrainingPair> pairs;
  pairs.reserve(seeds.size());
  for (std::size_t s : seeds) pairs.push_back(extract_training_pair(ground_truth, index, s, cfg, rng));
  return pairs;
}

}  // namespace pcup
