// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "pcup/kdtree.hpp"
#include "pcup/sampling.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace pcup;
using testing::error_code_of;

TEST_CASE("rng streams are reproducible") {
  Rng a(RngSeed{42}), b(RngSeed{42});
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng c = Rng::derive(RngSeed{42}, 1), d = Rng::derive(RngSeed{42}, 2);
  CHECK(c.next() != d.next());
  Rng e(RngSeed{7});
  for (int i = 0; i < 1000; ++i) {
    CHECK(e.below(13) < 13u);
    const double u = e.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal draws have unit variance") {
  Rng rng(RngSeed{3});
  double s = 0.0, s2 = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
  }
  CHECK(std::abs(s / n) < 0.03);
  CHECK(std::abs(s2 / n - 1.0) < 0.05);
}

TEST_CASE("cloud validation") {
  ColoredPointCloud c;
  CHECK(error_code_of([&] { c.validate(); }) == Errc::EmptyInput);
  c.push_back(Vec3{0, 0, 0}, Vec3{0.5f, 0.5f, 0.5f});
  CHECK_NOTHROW(c.validate());
  c.attributes[0].x() = 1.5f;
  CHECK_THROWS_AS(c.validate(), Error);
  c.attributes[0].x() = 0.5f;
  c.positions[0].y() = std::numeric_limits<float>::quiet_NaN();
  CHECK(error_code_of([&] { c.validate(); }) == Errc::NonFinite);
}

TEST_CASE("index construction errors") {
  std::vector<Vec3> none;
  CHECK(error_code_of([&] { build_index(none); }) == Errc::EmptyInput);
  std::vector<Vec3> bad{Vec3{0, 0, 0}, Vec3{std::numeric_limits<float>::infinity(), 0, 0}};
  CHECK(error_code_of([&] { build_index(bad); }) == Errc::NonFinite);
}

TEST_CASE("singleton index") {
  const std::vector<Vec3> one{Vec3{1, 2, 3}};
  const SpatialIndex idx = build_index(one);
  CHECK(idx.size() == 1);
  const NeighborSet r = knn(idx, Vec3{-5, 0, 9}, 1);
  CHECK(r.indices == std::vector<std::size_t>{0});
  CHECK(error_code_of([&] { knn(idx, Vec3{0, 0, 0}, 2); }) == Errc::KTooLarge);
  CHECK(error_code_of([&] { knn(idx, Vec3{0, 0, 0}, 0); }) == Errc::InvalidArgument);
}

TEST_CASE("knn on three collinear points") {
  const std::vector<Vec3> pts{Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{2, 0, 0}};
  const SpatialIndex idx = build_index(pts);
  const NeighborSet r = knn(idx, Vec3{0.9f, 0, 0}, 2);
  CHECK(r.indices == std::vector<std::size_t>{1, 0});
  CHECK(r.distances[0] == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(r.distances[1] == doctest::Approx(0.9).epsilon(1e-6));
}

TEST_CASE("knn tie goes to the smaller index") {
  std::vector<Vec3> pts(10);
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = Vec3{10.0f + float(i), 10, 10};
  pts[4] = Vec3{1, 0, 0};
  pts[7] = Vec3{-1, 0, 0};
  const SpatialIndex idx = build_index(pts);
  CHECK(knn(idx, Vec3{0, 0, 0}, 1).indices[0] == 4);
  CHECK(knn(idx, Vec3{0, 0, 0}, 2).indices == std::vector<std::size_t>{4, 7});
}

TEST_CASE("self queries return the point itself") {
  Rng rng(RngSeed{11});
  const auto pts = testing::random_points(1000, rng);
  const SpatialIndex idx = build_index(pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const NeighborSet r = knn(idx, pts[i], 1);
    CHECK(r.indices[0] == i);
    CHECK(r.distances[0] == 0.0f);
  }
}

TEST_CASE("property: knn equals an exhaustive scan") {
  Rng rng(RngSeed{5});
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 1 + rng.below(1500);
    const auto pts = trial % 2 ? testing::random_points(n, rng) : testing::lattice_points(n, rng);
    const SpatialIndex idx = build_index(pts);
    const std::size_t k = 1 + rng.below(std::min<std::size_t>(16, n));
    for (int q = 0; q < 40; ++q) {
      const Vec3 query = trial % 2 ? testing::random_point(rng) : testing::lattice_points(1, rng)[0];
      const NeighborSet r = knn(idx, query, k);
      REQUIRE(r.indices == naive::scan_knn(pts, query, k));
      REQUIRE(std::is_sorted(r.distances.begin(), r.distances.end()));
      for (std::size_t j = 0; j < k; ++j) {
        CHECK(r.distances[j] == std::sqrt(squared_distance(pts[r.indices[j]], query)));
      }
    }
  }
}

TEST_CASE("batch knn matches the serial reference") {
  Rng rng(RngSeed{8});
  const auto pts = testing::lattice_points(800, rng);
  const auto queries = testing::lattice_points(300, rng);
  const SpatialIndex idx = build_index(pts);
  const KnnTable a = knn_batch(idx, queries, 9);
  const KnnTable b = serial::brute_force_knn_batch(pts, queries, 9);
  CHECK(a.indices == b.indices);
  CHECK(a.sq_distances == b.sq_distances);
}

TEST_CASE("fps on collinear points") {
  const std::vector<Vec3> pts{Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{2, 0, 0}, Vec3{3, 0, 0}};
  CHECK(farthest_point_sample(pts, 3, 0) == std::vector<std::size_t>{0, 3, 1});
  CHECK(farthest_point_sample(pts, 1, 2) == std::vector<std::size_t>{2});
  auto all = farthest_point_sample(pts, 4, 1);
  std::sort(all.begin(), all.end());
  CHECK(all == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(error_code_of([&] { farthest_point_sample(pts, 5, 0); }) == Errc::CountTooLarge);
  CHECK(error_code_of([&] { farthest_point_sample(pts, 2, 4); }) == Errc::InvalidArgument);
}

TEST_CASE("property: fps greedy max-min and serial agreement") {
  Rng rng(RngSeed{21});
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t n = 20 + rng.below(400);
    const auto pts = trial % 2 ? testing::random_points(n, rng) : testing::lattice_points(n, rng, 4);
    const std::size_t count = 1 + rng.below(n);
    const std::size_t start = rng.below(n);
    const auto sel = farthest_point_sample(pts, count, start);
    REQUIRE(sel == serial::farthest_point_sample(pts, count, start));
    REQUIRE(sel.size() == count);
    CHECK(sel[0] == start);
    CHECK(std::set<std::size_t>(sel.begin(), sel.end()).size() == count);
    // Re-evaluate the max-min choice at every step.
    std::vector<bool> taken(n, false);
    taken[sel[0]] = true;
    for (std::size_t s = 1; s < count; ++s) {
      float best = -1.0f;
      std::size_t arg = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i]) continue;
        float m = std::numeric_limits<float>::infinity();
        for (std::size_t j = 0; j < s; ++j) m = std::min(m, squared_distance(pts[sel[j]], pts[i]));
        if (m > best) {
          best = m;
          arg = i;
        }
      }
      REQUIRE(sel[s] == arg);
      taken[arg] = true;
    }
  }
}

TEST_CASE("random downsample") {
  Rng rng(RngSeed{1});
  ColoredPointCloud cloud;
  for (std::size_t i = 0; i < 1024; ++i) {
    // Sentinel attribute encodes the index so pairing can be checked.
    cloud.push_back(testing::random_point(rng), Vec3{float(i) / 1023.0f, 0, 1});
  }
  Rng r1(RngSeed{9}), r2(RngSeed{9});
  const ColoredPointCloud a = random_downsample(cloud, 4.0, r1);
  const ColoredPointCloud b = random_downsample(cloud, 4.0, r2);
  CHECK(a.size() == 256);
  CHECK(a.positions == b.positions);
  CHECK(a.attributes == b.attributes);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto src = std::size_t(std::lround(a.attributes[i].x() * 1023.0f));
    CHECK(cloud.positions[src] == a.positions[i]);
  }
  for (double rate : {3.0, 7.0, 1000.0}) {
    Rng r(RngSeed{2});
    CHECK(random_downsample(cloud, rate, r).size() == std::size_t(std::floor(1024 / rate)));
  }
  Rng r3(RngSeed{4});
  const ColoredPointCloud same = random_downsample(cloud, 1.0, r3);
  CHECK(same.positions == cloud.positions);
  Rng r4(RngSeed{4});
  CHECK(error_code_of([&] { random_downsample(cloud, 2048.0, r4); }) == Errc::RateTooLarge);
}

TEST_CASE("operations leave inputs untouched") {
  Rng rng(RngSeed{13});
  const ColoredPointCloud cloud = testing::random_cloud(300, rng);
  const ColoredPointCloud copy = cloud;
  const SpatialIndex idx = build_index(cloud.positions);
  (void)knn(idx, Vec3{0.5f, 0.5f, 0.5f}, 5);
  (void)farthest_point_sample(cloud.positions, 30, 3);
  (void)random_downsample(cloud, 3.0, rng);
  CHECK(cloud.positions == copy.positions);
  CHECK(cloud.attributes == copy.attributes);
}
