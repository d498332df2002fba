// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pcup/coarse.hpp"
#include "pcup/kdtree.hpp"
#include "pcup/synthetic.hpp"
#include "support.hpp"

using namespace pcup;
using testing::error_code_of;

namespace {

// Straight evaluation of the weighted mean for one dense point, in double.
Eigen::Vector3d weighted_mean(const ColoredPointCloud& sparse, const Vec3& q, std::size_t k) {
  std::vector<std::size_t> idx(sparse.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const float da = squared_distance(sparse.positions[a], q), db = squared_distance(sparse.positions[b], q);
    return da < db || (da == db && a < b);
  });
  Eigen::Vector3d acc = Eigen::Vector3d::Zero();
  double wsum = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double d = std::sqrt(squared_distance_d(sparse.positions[idx[j]], q));
    if (d <= 1e-8) return sparse.attributes[idx[j]].cast<double>();
    const double w = 1.0 / (d + 1e-8);
    acc += w * sparse.attributes[idx[j]].cast<double>();
    wsum += w;
  }
  return acc / wsum;
}

}  // namespace

TEST_CASE("interpolation worked example") {
  ColoredPointCloud sparse;
  sparse.push_back(Vec3{1, 0, 0}, Vec3{0.9f, 0, 0});
  sparse.push_back(Vec3{-2, 0, 0}, Vec3{0, 0.9f, 0});
  sparse.push_back(Vec3{0, 50, 0}, Vec3{0, 0, 1});
  const std::vector<Vec3> dense{Vec3{0, 0, 0}};
  GdwaiConfig cfg;
  cfg.k1 = 2;
  const auto out = gdwai(dense, sparse, cfg);
  CHECK(out[0].x() == doctest::Approx(0.6).epsilon(1e-6));
  CHECK(out[0].y() == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(std::abs(out[0].z()) < 1e-6);
}

TEST_CASE("k1 = 1 copies the nearest color") {
  Rng rng(RngSeed{1});
  const ColoredPointCloud sparse = testing::random_cloud(200, rng);
  const auto dense = testing::random_points(500, rng);
  GdwaiConfig cfg;
  cfg.k1 = 1;
  const auto out = gdwai(dense, sparse, cfg);
  const SpatialIndex idx = build_index(sparse.positions);
  for (std::size_t i = 0; i < dense.size(); ++i) {
    CHECK(out[i] == sparse.attributes[knn(idx, dense[i], 1).indices[0]]);
  }
}

TEST_CASE("config and dimension errors") {
  GdwaiConfig cfg;
  cfg.k1 = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.epsilon = 0.0f;
  CHECK_THROWS_AS(cfg.validate(), Error);
  ColoredPointCloud sparse;
  sparse.push_back(Vec3{0, 0, 0}, Vec3{1, 1, 1});
  const std::vector<Vec3> dense{Vec3{1, 1, 1}};
  GdwaiConfig k3;
  k3.k1 = 3;
  CHECK(error_code_of([&] { gdwai(dense, sparse, k3); }) == Errc::KTooLarge);
  sparse.attributes.pop_back();
  CHECK(error_code_of([&] { gdwai(dense, sparse, {}); }) == Errc::DimensionMismatch);
}

TEST_CASE("property: oracle agreement, convexity, exact reproduction") {
  Rng rng(RngSeed{2});
  for (int trial = 0; trial < 5; ++trial) {
    const ColoredPointCloud sparse = testing::random_cloud(100 + rng.below(200), rng);
    std::vector<Vec3> dense = testing::random_points(400, rng);
    for (std::size_t i = 0; i < 50; ++i) dense.push_back(sparse.positions[i]);
    GdwaiConfig cfg;
    cfg.k1 = 1 + rng.below(5);
    const auto out = gdwai(dense, sparse, cfg);
    REQUIRE(out == serial::gdwai(dense, sparse, cfg));
    const SpatialIndex idx = build_index(sparse.positions);
    for (std::size_t i = 0; i < dense.size(); ++i) {
      const Eigen::Vector3d expect = weighted_mean(sparse, dense[i], cfg.k1);
      for (int c = 0; c < 3; ++c) CHECK(std::abs(double(out[i][c]) - expect[c]) < 1e-6);
      const NeighborSet nb = knn(idx, dense[i], cfg.k1);
      for (int c = 0; c < 3; ++c) {
        float lo = 1.0f, hi = 0.0f;
        for (std::size_t j : nb.indices) {
          lo = std::min(lo, sparse.attributes[j][c]);
          hi = std::max(hi, sparse.attributes[j][c]);
        }
        CHECK(out[i][c] >= lo);
        CHECK(out[i][c] <= hi);
      }
    }
    for (std::size_t i = 0; i < 50; ++i) CHECK(out[400 + i] == sparse.attributes[i]);
  }
}

TEST_CASE("property: closer neighbors weigh more") {
  // Two sparse points with black and white; the output moves toward white
  // as the query approaches the white point.
  ColoredPointCloud sparse;
  sparse.push_back(Vec3{0, 0, 0}, Vec3{0, 0, 0});
  sparse.push_back(Vec3{1, 0, 0}, Vec3{1, 1, 1});
  float prev = -1.0f;
  for (int s = 1; s < 20; ++s) {
    const std::vector<Vec3> q{Vec3{float(s) / 20.0f, 0.3f, 0}};
    const float v = gdwai(q, sparse, {})[0].x();
    CHECK(v > prev);
    prev = v;
  }
  const std::vector<Vec3> mid{Vec3{0.5f, 0.2f, 0}};
  CHECK(gdwai(mid, sparse, {})[0].x() == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("property: constant fields stay constant") {
  Rng rng(RngSeed{3});
  const Vec3 c{0.25f, 0.5f, 0.75f};
  const ColoredPointCloud sparse = synthetic::sphere(300, rng, synthetic::constant_color(c));
  const auto dense = testing::random_points(1000, rng);
  for (std::size_t k : {1u, 2u, 4u, 8u}) {
    GdwaiConfig cfg;
    cfg.k1 = k;
    for (const Vec3& a : gdwai(dense, sparse, cfg)) CHECK((a - c).cwiseAbs().maxCoeff() < 1e-6f);
  }
}

TEST_CASE("property: linear field on a line") {
  // a(x) = 0.1 + 0.8 x on collinear points; bracketing neighbors keep the
  // error below spacing * slope.
  ColoredPointCloud sparse;
  Rng rng(RngSeed{4});
  std::vector<float> xs;
  float x = 0.0f;
  while (x < 1.0f) {
    xs.push_back(x);
    x += 0.02f + 0.05f * float(rng.uniform01());
  }
  float max_gap = 0.0f;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sparse.push_back(Vec3{xs[i], 0, 0}, Vec3{0.1f + 0.8f * xs[i], 0, 0});
    if (i) max_gap = std::max(max_gap, xs[i] - xs[i - 1]);
  }
  std::vector<Vec3> dense;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    dense.push_back(Vec3{xs[i] + 0.5f * (xs[i + 1] - xs[i]), 0, 0});
  }
  const auto out = gdwai(dense, sparse, {});
  for (std::size_t i = 0; i < dense.size(); ++i) {
    CHECK(std::abs(out[i].x() - (0.1f + 0.8f * dense[i].x())) <= max_gap * 0.8f + 1e-6f);
  }
}

TEST_CASE("baseline geometry on two points") {
  const std::vector<Vec3> sparse{Vec3{0, 0, 0}, Vec3{2, 0, 0}};
  Rng rng(RngSeed{5});
  const auto out = upsample_geometry_baseline(sparse, 2, rng);
  REQUIRE(out.size() == 4);
  CHECK(out[0] == sparse[0]);
  CHECK(out[1] == sparse[1]);
  for (std::size_t i = 2; i < 4; ++i) {
    CHECK(out[i].x() >= 0.9f);
    CHECK(out[i].x() <= 1.1f);
    CHECK(out[i].y() == 0.0f);
    CHECK(out[i].z() == 0.0f);
  }
  Rng r1(RngSeed{5});
  CHECK(upsample_geometry_baseline(sparse, 1, r1) == sparse);
  const std::vector<Vec3> one{Vec3{0, 0, 0}};
  CHECK(error_code_of([&] { upsample_geometry_baseline(one, 4, r1); }) == Errc::TooFewPoints);
}

TEST_CASE("baseline geometry keeps the input as a prefix") {
  Rng rng(RngSeed{6});
  const auto sparse = testing::random_points(256, rng);
  Rng a(RngSeed{7}), b(RngSeed{7});
  const auto out = upsample_geometry_baseline(sparse, 4, a);
  REQUIRE(out.size() == 1024);
  CHECK(std::equal(sparse.begin(), sparse.end(), out.begin()));
  CHECK(out == upsample_geometry_baseline(sparse, 4, b));
  for (const Vec3& p : out) CHECK(p.allFinite());
  // Every new point lies near a segment between two input points, so never
  // outside their bounding box by more than the jitter.
  const Bounds bb = bounds_of(sparse);
  for (const Vec3& p : out) {
    CHECK((p - bb.min).minCoeff() >= -0.05f);
    CHECK((bb.max - p).minCoeff() >= -0.05f);
  }
}

TEST_CASE("ground-truth geometry returns the nearest reference points") {
  Rng rng(RngSeed{8});
  const auto ref = testing::random_points(2000, rng);
  const ReferenceGeometry geo(ref);
  const std::vector<Vec3> sparse{ref[10], ref[11], ref[12], ref[13]};
  const auto out = geo.upsample(sparse, 4, rng);
  REQUIRE(out.size() == 16);
  const SpatialIndex idx = build_index(ref);
  const NeighborSet nb = knn(idx, ref[10], 16);
  for (std::size_t i = 0; i < 16; ++i) CHECK(out[i] == ref[nb.indices[i]]);
}
