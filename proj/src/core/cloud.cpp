// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include "pcup/cloud.hpp"

#include <cmath>
#include <string>

#include "pcup/error.hpp"

namespace pcup {

ColoredPointCloud::ColoredPointCloud(std::vector<Vec3> pos, std::vector<Vec3> attr)
    : positions(std::move(pos)), attributes(std::move(attr)) {}

void ColoredPointCloud::reserve(std::size_t n) {
  positions.reserve(n);
  attributes.reserve(n);
}

void ColoredPointCloud::push_back(const Vec3& position, const Vec3& attribute) {
  positions.push_back(position);
  attributes.push_back(attribute);
}

ColoredPointCloud ColoredPointCloud::subset(std::span<const std::size_t> indices) const {
  ColoredPointCloud out;
  out.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= size()) fail(Errc::InvalidArgument, "subset index out of range");
    out.push_back(positions[i], attributes[i]);
  }
  return out;
}

void ColoredPointCloud::validate() const {
  if (positions.size() != attributes.size()) {
    fail(Errc::DimensionMismatch, "positions/attributes length differ (" +
                                      std::to_string(positions.size()) + " vs " +
                                      std::to_string(attributes.size()) + ")");
  }
  check_positions(positions);
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      const float a = attributes[i][c];
      if (!(a >= 0.0f && a <= 1.0f)) {
        fail(Errc::InvalidArgument, "attribute of point " + std::to_string(i) + " outside [0,1]");
      }
    }
  }
}

void check_positions(std::span<const Vec3> positions) {
  if (positions.empty()) fail(Errc::EmptyInput, "point set is empty");
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!positions[i].allFinite()) {
      fail(Errc::NonFinite, "coordinate of point " + std::to_string(i) + " is not finite");
    }
  }
}

ColoredPointCloud concatenate(std::span<const ColoredPointCloud> clouds) {
  std::size_t total = 0;
  for (const auto& c : clouds) total += c.size();
  ColoredPointCloud out;
  out.reserve(total);
  for (const auto& c : clouds) {
    out.positions.insert(out.positions.end(), c.positions.begin(), c.positions.end());
    out.attributes.insert(out.attributes.end(), c.attributes.begin(), c.attributes.end());
  }
  return out;
}

Bounds bounds_of(std::span<const Vec3> positions) {
  if (positions.empty()) fail(Errc::EmptyInput, "bounds of empty point set");
  Bounds b{positions[0], positions[0]};
  for (const auto& p : positions) {
    b.min = b.min.cwiseMin(p);
    b.max = b.max.cwiseMax(p);
  }
  return b;
}

}  // namespace pcup
