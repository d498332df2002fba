// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <omp.h>

#include "pcup/metrics.hpp"
#include "pcup/nn/networks.hpp"
#include "pcup/pipeline.hpp"
#include "pcup/sampling.hpp"
#include "pcup/synthetic.hpp"
#include "support.hpp"

using namespace pcup;
using testing::error_code_of;

TEST_CASE("output count is n * R") {
  Rng rng(RngSeed{1});
  const ColoredPointCloud input = synthetic::sphere(700, rng, synthetic::texture(0));
  const MidpointUpsampler geo;
  for (int r : {2, 4, 5}) {
    UpsampleOptions o;
    o.partition.patch_size = 64;
    o.partition.rate = r;
    const UpsampleResult res = upsample_cloud(input, geo, o);
    CHECK(res.cloud.size() == 700 * std::size_t(r));
    CHECK(res.patches == patch_count(700, 3.0, 64));
    CHECK(res.candidates == res.patches * 64 * std::size_t(r));
    CHECK_NOTHROW(res.cloud.validate());
  }
}

TEST_CASE("result does not depend on the thread count") {
  Rng rng(RngSeed{2});
  const ColoredPointCloud input = synthetic::wavy_sheet(900, rng, synthetic::texture(1));
  const MidpointUpsampler geo;
  UpsampleOptions o;
  o.partition.patch_size = 64;
  o.seed = RngSeed{9};
  const int before = omp_get_max_threads();
  omp_set_num_threads(1);
  const ColoredPointCloud one = upsample_cloud(input, geo, o).cloud;
  omp_set_num_threads(3);
  const ColoredPointCloud three = upsample_cloud(input, geo, o).cloud;
  omp_set_num_threads(before);
  CHECK(one.positions == three.positions);
  CHECK(one.attributes == three.attributes);
}

TEST_CASE("constant color survives the pipeline with a learned model") {
  Rng rng(RngSeed{3});
  const Vec3 c{0.1f, 0.7f, 0.4f};
  const ColoredPointCloud gt = synthetic::sphere(2048, rng, synthetic::constant_color(c));
  const ColoredPointCloud sparse = random_downsample(gt, 4.0, rng);
  const ReferenceGeometry geo(gt.positions);
  nn::ModelSpec spec;
  spec.net.patch_size = 64;
  spec.net.k2 = 8;
  Rng init(RngSeed{4});
  const nn::ParameterStore params = nn::init_model(spec, init);
  UpsampleOptions o;
  o.partition.patch_size = 64;
  o.params = &params;
  o.spec = spec;
  const ColoredPointCloud out = upsample_cloud(sparse, geo, o).cloud;
  CHECK(attribute_psnr(out, gt).y >= 99.0);

  o.spec.net.rate = 8;
  CHECK(error_code_of([&] { upsample_cloud(sparse, geo, o); }) == Errc::IncompatibleCheckpoint);
}

TEST_CASE("training pair sampling") {
  Rng rng(RngSeed{5});
  const ColoredPointCloud gt = synthetic::sphere(3000, rng, synthetic::texture(0));
  PartitionConfig cfg;
  cfg.patch_size = 32;
  Rng a(RngSeed{1}), b(RngSeed{1});
  const auto pairs = sample_training_pairs(gt, cfg, 0, a);
  CHECK(pairs.size() == patch_count(3000, 1.0, 128));
  const auto again = sample_training_pairs(gt, cfg, 0, b);
  CHECK(again[3].dense.positions == pairs[3].dense.positions);
  CHECK(sample_training_pairs(gt, cfg, 5, a).size() == 5);
  cfg.patch_size = 1024;
  CHECK(error_code_of([&] { sample_training_pairs(gt, cfg, 0, a); }) == Errc::CloudTooSmall);
}
