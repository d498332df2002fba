// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PCUP_COARSE_HPP
#define PCUP_COARSE_HPP

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pcup/cloud.hpp"
#include "pcup/kdtree.hpp"
#include "pcup/rng.hpp"

namespace pcup {

/// Produces m*R dense positions from m sparse ones. Implementations must be
/// safe to call concurrently (each call gets its own Rng).
class GeometryUpsampler {
 public:
  virtual ~GeometryUpsampler() = default;
  virtual std::vector<Vec3> upsample(std::span<const Vec3> sparse, int rate, Rng& rng) const = 0;
  virtual std::string name() const = 0;
  /// Whether train() has parameters to fit with the Chamfer objective.
  virtual bool learnable() const { return false; }
};

/// Non-learned baseline: keeps the sparse points, then emits jittered
/// midpoints of K-NN edges (4 nearest neighbors, round-robin).
class MidpointUpsampler final : public GeometryUpsampler {
 public:
  std::vector<Vec3> upsample(std::span<const Vec3> sparse, int rate, Rng& rng) const override;
  std::string name() const override { return "baseline"; }
};

/// Returns known dense coordinates: the m*R reference points nearest to the
/// patch's first point (its seed). Used to score attributes in isolation.
class ReferenceGeometry final : public GeometryUpsampler {
 public:
  explicit ReferenceGeometry(std::vector<Vec3> dense);
  std::vector<Vec3> upsample(std::span<const Vec3> sparse, int rate, Rng& rng) const override;
  std::string name() const override { return "ground-truth"; }

 private:
  std::vector<Vec3> dense_;
  SpatialIndex index_;
};

std::vector<Vec3> upsample_geometry_baseline(std::span<const Vec3> sparse, int rate, Rng& rng);

struct GdwaiConfig {
  std::size_t k1 = 2;
  float epsilon = 1e-8f;

  void validate() const;
};

/// Inverse-distance weighted attribute interpolation from the k1 nearest
/// sparse points, w = 1/(d + epsilon). Dense points within epsilon of a
/// sparse point copy its attribute exactly. OpenMP over dense points.
std::vector<Vec3> gdwai(std::span<const Vec3> dense_positions, const ColoredPointCloud& sparse,
                        const GdwaiConfig& cfg = {});

/// Same, reusing a prebuilt index over `sparse.positions`.
std::vector<Vec3> gdwai(std::span<const Vec3> dense_positions, const ColoredPointCloud& sparse,
                        const SpatialIndex& sparse_index, const GdwaiConfig& cfg);

namespace serial {

/// Plain loop over dense points with exhaustive neighbor scans.
std::vector<Vec3> gdwai(std::span<const Vec3> dense_positions, const ColoredPointCloud& sparse,
                        const GdwaiConfig& cfg = {});

}  // namespace serial
}  // namespace pcup

#endif  // PCUP_COARSE_HPP
