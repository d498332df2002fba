// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include "pcup/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "pcup/error.hpp"

namespace pcup {
namespace {

void require_points(std::span<const Vec3> a, std::span<const Vec3> b) {
  if (a.empty() || b.empty()) fail(Errc::EmptyInput, "metric needs non-empty point sets");
}

// Squared distances from each point of `from` to its nearest neighbor in `to`.
std::vector<double> nn_sq_distances(std::span<const Vec3> from, std::span<const Vec3> to,
                                    bool parallel) {
  const SpatialIndex index(to);
  const auto nn = parallel ? nearest_indices(from, index) : serial::nearest_indices(from, index);
  std::vector<double> d2(from.size());
  for (std::size_t i = 0; i < from.size(); ++i) d2[i] = squared_distance_d(from[i], to[nn[i]]);
  return d2;
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

double chamfer_impl(std::span<const Vec3> a, std::span<const Vec3> b, bool parallel) {
  require_points(a, b);
  return mean(nn_sq_distances(a, b, parallel)) + mean(nn_sq_distances(b, a, parallel));
}

double hausdorff_impl(std::span<const Vec3> a, std::span<const Vec3> b, bool parallel) {
  require_points(a, b);
  const auto ab = nn_sq_distances(a, b, parallel);
  const auto ba = nn_sq_distances(b, a, parallel);
  const double m = std::max(*std::max_element(ab.begin(), ab.end()),
                            *std::max_element(ba.begin(), ba.end()));
  return std::sqrt(m);
}

// Unit normal of the least-squares plane through the indexed points.
Eigen::Vector3d fit_normal(std::span<const Vec3> reference, std::span<const std::size_t> idx) {
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (std::size_t j : idx) centroid += reference[j].cast<double>();
  centroid /= double(idx.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (std::size_t j : idx) {
    const Eigen::Vector3d d = reference[j].cast<double>() - centroid;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
  return solver.eigenvectors().col(0);
}

double p2f_impl(std::span<const Vec3> pred, std::span<const Vec3> reference, std::size_t k_plane,
                bool parallel) {
  if (pred.empty()) fail(Errc::EmptyInput, "p2f needs predicted points");
  if (k_plane < 3) fail(Errc::InvalidArgument, "a plane needs k_plane >= 3");
  if (reference.size() < k_plane) {
    fail(Errc::TooFewReferencePoints, "reference has " + std::to_string(reference.size()) +
                                          " points, plane fit needs " + std::to_string(k_plane));
  }
  const SpatialIndex index(reference);
  const auto nn = parallel ? nearest_indices(pred, index) : serial::nearest_indices(pred, index);
  std::vector<double> dist(pred.size());
  const auto n = std::int64_t(pred.size());
#pragma omp parallel if (parallel)
  {
    std::vector<std::pair<float, std::uint32_t>> scratch;
    std::vector<std::size_t> idx(k_plane);
    std::vector<float> d2(k_plane);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      index.knn_into(reference[nn[i]], k_plane, idx, d2, scratch);
      // The plane passes through the associated reference point itself.
      const Eigen::Vector3d normal = fit_normal(reference, idx);
      dist[i] = std::abs(normal.dot(pred[i].cast<double>() - reference[nn[i]].cast<double>()));
    }
  }
  return mean(dist);
}

struct ChannelErrors {
  std::array<double, 4> sum{};  // y, r, g, b
};

ChannelErrors attribute_errors(const ColoredPointCloud& from, const ColoredPointCloud& to,
                               bool parallel) {
  const SpatialIndex index(to.positions);
  const auto nn =
      parallel ? nearest_indices(from.positions, index) : serial::nearest_indices(from.positions, index);
  ChannelErrors e;
  for (std::size_t i = 0; i < from.size(); ++i) {
    const Vec3& a = from.attributes[i];
    const Vec3& b = to.attributes[nn[i]];
    const double dy = 255.0 * (luma(a) - luma(b));
    e.sum[0] += dy * dy;
    for (int c = 0; c < 3; ++c) {
      const double d = 255.0 * (double(a[c]) - double(b[c]));
      e.sum[1 + c] += d * d;
    }
  }
  for (double& s : e.sum) s /= double(from.size());
  return e;
}

double psnr_from_mse(double mse, double peak) {
  if (mse <= 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(peak * peak / mse));
}

PsnrResult psnr_impl(const ColoredPointCloud& pred, const ColoredPointCloud& gt, double peak,
                     bool parallel) {
  if (pred.empty() || gt.empty()) fail(Errc::EmptyInput, "PSNR needs non-empty clouds");
  if (pred.attributes.size() != pred.size() || gt.attributes.size() != gt.size()) {
    fail(Errc::DimensionMismatch, "positions/attributes length differ");
  }
  const ChannelErrors pg = attribute_errors(pred, gt, parallel);
  const ChannelErrors gp = attribute_errors(gt, pred, parallel);
  PsnrResult r;
  r.y = psnr_from_mse(std::max(pg.sum[0], gp.sum[0]), peak);
  for (int c = 0; c < 3; ++c) r.rgb[c] = psnr_from_mse(std::max(pg.sum[1 + c], gp.sum[1 + c]), peak);
  return r;
}

}  // namespace

double luma(const Vec3& rgb01) {
  return 0.2126 * double(rgb01.x()) + 0.7152 * double(rgb01.y()) + 0.0722 * double(rgb01.z());
}

double chamfer(std::span<const Vec3> a, std::span<const Vec3> b) {
  return chamfer_impl(a, b, true);
}

double hausdorff(std::span<const Vec3> a, std::span<const Vec3> b) {
  return hausdorff_impl(a, b, true);
}

double jsd(std::span<const Vec3> a, std::span<const Vec3> b, std::size_t voxel_res) {
  require_points(a, b);
  if (voxel_res == 0) fail(Errc::InvalidArgument, "voxel resolution must be positive");
  Eigen::Vector3d lo = a[0].cast<double>(), hi = lo;
  for (auto set : {a, b}) {
    for (const Vec3& p : set) {
      lo = lo.cwiseMin(p.cast<double>());
      hi = hi.cwiseMax(p.cast<double>());
    }
  }
  const Eigen::Vector3d ext = hi - lo;
  const auto cell = [&](const Vec3& p) {
    std::size_t id = 0;
    for (int c = 0; c < 3; ++c) {
      std::size_t v = 0;
      if (ext[c] > 0.0) {
        const double t = (double(p[c]) - lo[c]) / ext[c] * double(voxel_res);
        v = std::min(voxel_res - 1, std::size_t(std::max(0.0, std::floor(t))));
      }
      id = id * voxel_res + v;
    }
    return id;
  };
  const std::size_t cells = voxel_res * voxel_res * voxel_res;
  std::vector<double> pa(cells, 0.0), pb(cells, 0.0);
  for (const Vec3& p : a) pa[cell(p)] += 1.0;
  for (const Vec3& p : b) pb[cell(p)] += 1.0;
  double out = 0.0;
  const double na = double(a.size()), nb = double(b.size());
  for (std::size_t i = 0; i < cells; ++i) {
    const double p = pa[i] / na, q = pb[i] / nb;
    const double m = 0.5 * (p + q);
    if (p > 0.0) out += 0.5 * p * std::log(p / m);
    if (q > 0.0) out += 0.5 * q * std::log(q / m);
  }
  return std::max(0.0, out);
}

double p2f(std::span<const Vec3> pred, std::span<const Vec3> reference, std::size_t k_plane) {
  return p2f_impl(pred, reference, k_plane, true);
}

PsnrResult attribute_psnr(const ColoredPointCloud& pred, const ColoredPointCloud& gt, double peak) {
  return psnr_impl(pred, gt, peak, true);
}

MetricReport evaluate(const ColoredPointCloud& pred, const ColoredPointCloud& gt,
                      bool with_complexity) {
  MetricReport r;
  r.cd = chamfer(pred.positions, gt.positions);
  r.hd = hausdorff(pred.positions, gt.positions);
  r.jsd = jsd(pred.positions, gt.positions);
  r.p2f = p2f(pred.positions, gt.positions, std::min<std::size_t>(16, gt.size()));
  const PsnrResult ps = attribute_psnr(pred, gt);
  r.psnr_y = ps.y;
  r.psnr_r = ps.rgb[0];
  r.psnr_g = ps.rgb[1];
  r.psnr_b = ps.rgb[2];
  if (with_complexity) {
    const Complexity c = content_complexity(pred);
    r.g_c = c.g_c;
    r.a_c = c.a_c;
  }
  return r;
}

namespace serial {

double chamfer(std::span<const Vec3> a, std::span<const Vec3> b) {
  return chamfer_impl(a, b, false);
}

double hausdorff(std::span<const Vec3> a, std::span<const Vec3> b) {
  return hausdorff_impl(a, b, false);
}

double p2f(std::span<const Vec3> pred, std::span<const Vec3> reference, std::size_t k_plane) {
  return p2f_impl(pred, reference, k_plane, false);
}

PsnrResult attribute_psnr(const ColoredPointCloud& pred, const ColoredPointCloud& gt, double peak) {
  return psnr_impl(pred, gt, peak, false);
}

}  // namespace serial
}  // namespace pcup
