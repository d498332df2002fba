// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include "pcup/coarse.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "pcup/error.hpp"

namespace pcup {
namespace {

void check_inputs(std::span<const Vec3> dense, const ColoredPointCloud& sparse,
                  const GdwaiConfig& cfg) {
  cfg.validate();
  if (sparse.positions.size() != sparse.attributes.size()) {
    fail(Errc::DimensionMismatch, "sparse positions/attributes length differ");
  }
  if (sparse.empty() || dense.empty()) fail(Errc::DimensionMismatch, "empty point set");
  if (cfg.k1 > sparse.size()) {
    fail(Errc::KTooLarge, "k1=" + std::to_string(cfg.k1) + " exceeds " +
                              std::to_string(sparse.size()) + " sparse points");
  }
}

// Weighted mean of the neighbors' attributes, or an exact copy when the
// nearest one coincides with the query.
Vec3 interpolate(std::span<const std::size_t> nbrs, std::span<const float> sq_dist,
                 const ColoredPointCloud& sparse, float epsilon) {
  const double d0 = std::sqrt(double(sq_dist[0]));
  if (d0 <= epsilon) return sparse.attributes[nbrs[0]];
  double acc[3] = {0.0, 0.0, 0.0};
  double wsum = 0.0;
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    const double w = 1.0 / (std::sqrt(double(sq_dist[i])) + epsilon);
    const Vec3& a = sparse.attributes[nbrs[i]];
    acc[0] += w * a.x();
    acc[1] += w * a.y();
    acc[2] += w * a.z();
    wsum += w;
  }
  return Vec3(float(acc[0] / wsum), float(acc[1] / wsum), float(acc[2] / wsum));
}

}  // namespace

void GdwaiConfig::validate() const {
  if (k1 < 1) fail(Errc::InvalidArgument, "k1 must be >= 1");
  if (!(epsilon > 0.0f)) fail(Errc::InvalidArgument, "epsilon must be > 0");
}

std::vector<Vec3> gdwai(std::span<const Vec3> dense_positions, const ColoredPointCloud& sparse,
                        const SpatialIndex& sparse_index, const GdwaiConfig& cfg) {
  check_inputs(dense_positions, sparse, cfg);
  if (sparse_index.size() != sparse.size()) {
    fail(Errc::DimensionMismatch, "index does not match the sparse cloud");
  }
  const std::size_t k = cfg.k1;
  std::vector<Vec3> out(dense_positions.size());
  const auto n = std::int64_t(dense_positions.size());
#pragma omp parallel
  {
    std::vector<std::pair<float, std::uint32_t>> scratch;
    std::vector<std::size_t> idx(k);
    std::vector<float> d2(k);
#pragma omp for schedule(static)
    for (std::int64_t j = 0; j < n; ++j) {
      sparse_index.knn_into(dense_positions[j], k, idx, d2, scratch);
      out[j] = interpolate(idx, d2, sparse, cfg.epsilon);
    }
  }
  return out;
}

std::vector<Vec3> gdwai(std::span<const Vec3> dense_positions, const ColoredPointCloud& sparse,
                        const GdwaiConfig& cfg) {
  check_inputs(dense_positions, sparse, cfg);
  const SpatialIndex index(sparse.positions);
  return gdwai(dense_positions, sparse, index, cfg);
}

namespace serial {

std::vector<Vec3> gdwai(std::span<const Vec3> dense_positions, const ColoredPointCloud& sparse,
                        const GdwaiConfig& cfg) {
  check_inputs(dense_positions, sparse, cfg);
  std::vector<Vec3> out;
  out.reserve(dense_positions.size());
  for (const Vec3& p : dense_positions) {
    const NeighborSet nn = brute_force_knn(sparse.positions, p, cfg.k1);
    std::vector<float> d2(nn.size());
    for (std::size_t i = 0; i < nn.size(); ++i) {
      d2[i] = squared_distance(p, sparse.positions[nn.indices[i]]);
    }
    out.push_back(interpolate(nn.indices, d2, sparse, cfg.epsilon));
  }
  return out;
}

}  // namespace serial
}  // namespace pcup
