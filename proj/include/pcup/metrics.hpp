// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PCUP_METRICS_HPP
#define PCUP_METRICS_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcup/cloud.hpp"
#include "pcup/kdtree.hpp"

namespace pcup {

/// PSNR reported for identical attributes.
inline constexpr double kPsnrCap = 100.0;

/// For every query, the index of its nearest point in `index`.
std::vector<std::size_t> nearest_indices(std::span<const Vec3> queries, const SpatialIndex& index);

/// Mean squared nearest-neighbor distance a->b plus b->a.
double chamfer(std::span<const Vec3> a, std::span<const Vec3> b);

/// Largest nearest-neighbor distance in either direction (not squared).
double hausdorff(std::span<const Vec3> a, std::span<const Vec3> b);

/// Jensen-Shannon divergence (natural log) of voxel occupancy over the
/// shared bounding box, voxel_res^3 cells.
double jsd(std::span<const Vec3> a, std::span<const Vec3> b, std::size_t voxel_res = 32);

/// Mean distance from each predicted point to the least-squares plane of
/// the k_plane reference neighbors of its nearest reference point.
/// One-directional: pred -> reference only.
double p2f(std::span<const Vec3> pred, std::span<const Vec3> reference, std::size_t k_plane = 16);

struct PsnrResult {
  double y = kPsnrCap;
  std::array<double, 3> rgb{kPsnrCap, kPsnrCap, kPsnrCap};
};

/// Symmetric nearest-neighbor attribute PSNR on the 0-255 scale, BT.709
/// luma, worse of the two directions.
PsnrResult attribute_psnr(const ColoredPointCloud& pred, const ColoredPointCloud& gt,
                          double peak = 255.0);

struct Complexity {
  double g_c = 0.0;
  double a_c = 0.0;
};

/// Depth and luma image variances of the six bounding-box face projections.
Complexity content_complexity(const ColoredPointCloud& cloud, std::size_t raster = 512);

double luma(const Vec3& rgb01);

struct MetricReport {
  double cd = 0.0;
  double hd = 0.0;
  double jsd = 0.0;
  double p2f = 0.0;
  double psnr_y = kPsnrCap;
  double psnr_r = kPsnrCap;
  double psnr_g = kPsnrCap;
  double psnr_b = kPsnrCap;
  std::optional<double> g_c;
  std::optional<double> a_c;

  /// One `name=value` per line.
  std::string to_text() const;
  std::string to_json() const;
  static MetricReport from_json(const std::string& text);
};

/// Geometry and attribute metrics of `pred` against `gt`; the complexity
/// pair is that of `pred` when requested.
MetricReport evaluate(const ColoredPointCloud& pred, const ColoredPointCloud& gt,
                      bool with_complexity = false);

namespace serial {

std::vector<std::size_t> nearest_indices(std::span<const Vec3> queries, const SpatialIndex& index);
double chamfer(std::span<const Vec3> a, std::span<const Vec3> b);
double hausdorff(std::span<const Vec3> a, std::span<const Vec3> b);
double p2f(std::span<const Vec3> pred, std::span<const Vec3> reference, std::size_t k_plane = 16);
PsnrResult attribute_psnr(const ColoredPointCloud& pred, const ColoredPointCloud& gt,
                          double peak = 255.0);

}  // namespace serial
}  // namespace pcup

#endif  // PCUP_METRICS_HPP
