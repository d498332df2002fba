// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "pcup/error.hpp"
#include "pcup/metrics.hpp"

namespace pcup {
namespace {

struct Pixel {
  double depth = std::numeric_limits<double>::infinity();
  double depth_value = 0.0;
  double luma_value = 0.0;
  bool occupied = false;
};

double variance(const std::vector<double>& v) {
  // Shifted by the first value so that constant images give exactly zero.
  const double x0 = v.front();
  double m = 0.0;
  for (double x : v) m += x - x0;
  m /= double(v.size());
  double s = 0.0;
  for (double x : v) s += (x - x0 - m) * (x - x0 - m);
  return s / double(v.size());
}

}  // namespace

Complexity content_complexity(const ColoredPointCloud& cloud, std::size_t raster) {
  if (cloud.empty()) fail(Errc::EmptyInput, "complexity of an empty cloud");
  if (raster == 0) fail(Errc::InvalidArgument, "raster must be positive");
  const Bounds b = bounds_of(cloud.positions);
  const Eigen::Vector3d lo = b.min.cast<double>();
  const Eigen::Vector3d ext = b.max.cast<double>() - lo;

  const auto pixel_of = [&](double v, int axis, double span) -> std::size_t {
    if (span <= 0.0) return 0;
    const double t = (v - lo[axis]) / span * double(raster);
    return std::min(raster - 1, std::size_t(std::max(0.0, std::floor(t))));
  };

  Complexity out;
  std::vector<Pixel> image(raster * raster);
  for (int axis = 0; axis < 3; ++axis) {
    const int u = (axis + 1) % 3;
    const int v = (axis + 2) % 3;
    const double span = std::max(ext[u], ext[v]);
    for (int side = 0; side < 2; ++side) {
      std::fill(image.begin(), image.end(), Pixel{});
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Vec3& p = cloud.positions[i];
        const double d = side == 0 ? double(p[axis]) - lo[axis]
                                   : lo[axis] + ext[axis] - double(p[axis]);
        Pixel& px = image[pixel_of(p[v], v, span) * raster + pixel_of(p[u], u, span)];
        if (d < px.depth) {
          px.depth = d;
          px.depth_value = ext[axis] > 0.0 ? 255.0 * d / ext[axis] : 0.0;
          px.luma_value = 255.0 * luma(cloud.attributes[i]);
          px.occupied = true;
        }
      }
      std::vector<double> g, a;
      for (const Pixel& px : image) {
        if (!px.occupied) continue;
        g.push_back(px.depth_value);
        a.push_back(px.luma_value);
      }
      out.g_c += variance(g);
      out.a_c += variance(a);
    }
  }
  out.g_c /= 6.0;
  out.a_c /= 6.0;
  return out;
}

}  // namespace pcup
