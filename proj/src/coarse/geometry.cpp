// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include "pcup/coarse.hpp"

#include <algorithm>
#include <string>

#include "pcup/error.hpp"

namespace pcup {

std::vector<Vec3> upsample_geometry_baseline(std::span<const Vec3> sparse, int rate, Rng& rng) {
  if (sparse.size() < 2) fail(Errc::TooFewPoints, "baseline up-sampler needs >= 2 points");
  if (rate < 1) fail(Errc::InvalidArgument, "rate must be >= 1");
  check_positions(sparse);
  const std::size_t m = sparse.size();
  std::vector<Vec3> out(sparse.begin(), sparse.end());
  if (rate == 1) return out;

  const std::size_t fan = std::min<std::size_t>(4, m - 1);
  const SpatialIndex index(sparse);
  const KnnTable table = knn_batch(index, sparse, fan + 1);

  // Neighbor lists without the point itself.
  std::vector<std::size_t> nbrs(m * fan);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t w = 0;
    for (std::size_t j : table.row(i)) {
      if (j != i && w < fan) nbrs[i * fan + w++] = j;
    }
  }
  std::vector<std::size_t> offset(m);
  for (auto& o : offset) o = rng.below(fan);

  const std::size_t extra = m * std::size_t(rate - 1);
  out.reserve(m + extra);
  for (std::size_t t = 0; t < extra; ++t) {
    const std::size_t src = t % m;
    const std::size_t round = t / m;
    const Vec3& a = sparse[src];
    const Vec3& b = sparse[nbrs[src * fan + (offset[src] + round) % fan]];
    const float along = float(0.5 + rng.uniform(-0.05, 0.05));
    out.push_back(a + along * (b - a));
  }
  return out;
}

std::vector<Vec3> MidpointUpsampler::upsample(std::span<const Vec3> sparse, int rate,
                                              Rng& rng) const {
  return upsample_geometry_baseline(sparse, rate, rng);
}

ReferenceGeometry::ReferenceGeometry(std::vector<Vec3> dense)
    : dense_(std::move(dense)), index_(dense_) {}

std::vector<Vec3> ReferenceGeometry::upsample(std::span<const Vec3> sparse, int rate,
                                              Rng& /*rng*/) const {
  if (sparse.empty()) fail(Errc::EmptyInput, "empty sparse patch");
  const std::size_t want = sparse.size() * std::size_t(rate);
  if (want > dense_.size()) {
    fail(Errc::CloudTooSmall, "reference geometry has " + std::to_string(dense_.size()) +
                                  " points, patch needs " + std::to_string(want));
  }
  const NeighborSet nn = index_.knn(sparse[0], want);
  std::vector<Vec3> out(want);
  for (std::size_t i = 0; i < want; ++i) out[i] = dense_[nn.indices[i]];
  return out;
}

}  // namespace pcup
