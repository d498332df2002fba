// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PCUP_CLOUD_HPP
#define PCUP_CLOUD_HPP

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace pcup {

using Vec3 = Eigen::Vector3f;

/// Squared Euclidean distance in single precision. Every kernel and the
/// brute-force references share this so tie-breaking sees identical values.
inline float squared_distance(const Vec3& a, const Vec3& b) {
  const float dx = a.x() - b.x();
  const float dy = a.y() - b.y();
  const float dz = a.z() - b.z();
  return dx * dx + dy * dy + dz * dz;
}

inline double squared_distance_d(const Vec3& a, const Vec3& b) {
  const double dx = double(a.x()) - double(b.x());
  const double dy = double(a.y()) - double(b.y());
  const double dz = double(a.z()) - double(b.z());
  return dx * dx + dy * dy + dz * dz;
}

/// Geometry plus RGB attributes in [0,1], stored as parallel arrays.
///
/// Invariants (checked by validate()): equal lengths, at least one point,
/// finite coordinates, every attribute channel inside [0,1].
struct ColoredPointCloud {
  std::vector<Vec3> positions;
  std::vector<Vec3> attributes;

  ColoredPointCloud() = default;
  ColoredPointCloud(std::vector<Vec3> pos, std::vector<Vec3> attr);

  std::size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }

  void reserve(std::size_t n);
  void push_back(const Vec3& position, const Vec3& attribute);

  /// Points at `indices`, in that order.
  ColoredPointCloud subset(std::span<const std::size_t> indices) const;

  void validate() const;
};

/// Throws EmptyInput / NonFinite.
void check_positions(std::span<const Vec3> positions);

ColoredPointCloud concatenate(std::span<const ColoredPointCloud> clouds);

/// Axis-aligned bounds of a non-empty point set.
struct Bounds {
  Vec3 min;
  Vec3 max;
  Vec3 extent() const { return max - min; }
  float diagonal() const { return extent().norm(); }
};

Bounds bounds_of(std::span<const Vec3> positions);

}  // namespace pcup

#endif  // PCUP_CLOUD_HPP
