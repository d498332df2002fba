// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

// Naive reference implementations shared by the unit tests and the
// acceptance runner.

#ifndef PCUP_TESTS_ORACLES_HPP
#define PCUP_TESTS_ORACLES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <tuple>
#include <vector>

#include "pcup/cloud.hpp"

namespace naive {

using pcup::ColoredPointCloud;
using pcup::Vec3;
using pcup::squared_distance;

// Exhaustive scan with (squared distance, index) ordering, written
// independently of the library's own brute-force reference.
inline std::vector<std::size_t> scan_knn(const std::vector<Vec3>& pts, const Vec3& q, std::size_t k) {
  std::vector<std::size_t> idx(pts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const float da = squared_distance(pts[a], q), db = squared_distance(pts[b], q);
    return da < db || (da == db && a < b);
  });
  idx.resize(k);
  return idx;
}


inline std::size_t nearest(const std::vector<Vec3>& set, const Vec3& q) {
  std::size_t best = 0;
  float bd = squared_distance(set[0], q);
  for (std::size_t i = 1; i < set.size(); ++i) {
    const float d = squared_distance(set[i], q);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return best;
}

inline double d2(const Vec3& a, const Vec3& b) { return (a.cast<double>() - b.cast<double>()).squaredNorm(); }

inline double chamfer(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  double s1 = 0.0, s2 = 0.0;
  for (const Vec3& p : a) s1 += d2(p, b[nearest(b, p)]);
  for (const Vec3& p : b) s2 += d2(p, a[nearest(a, p)]);
  return s1 / double(a.size()) + s2 / double(b.size());
}

inline double hausdorff(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  double m = 0.0;
  for (const Vec3& p : a) m = std::max(m, d2(p, b[nearest(b, p)]));
  for (const Vec3& p : b) m = std::max(m, d2(p, a[nearest(a, p)]));
  return std::sqrt(m);
}

inline double jsd(const std::vector<Vec3>& a, const std::vector<Vec3>& b, int res) {
  double lo[3], hi[3];
  for (int c = 0; c < 3; ++c) lo[c] = hi[c] = a[0][c];
  for (const auto* set : {&a, &b}) {
    for (const Vec3& p : *set) {
      for (int c = 0; c < 3; ++c) {
        lo[c] = std::min(lo[c], double(p[c]));
        hi[c] = std::max(hi[c], double(p[c]));
      }
    }
  }
  using Cell = std::tuple<int, int, int>;
  const auto cell = [&](const Vec3& p) {
    int v[3];
    for (int c = 0; c < 3; ++c) {
      const double ext = hi[c] - lo[c];
      v[c] = ext > 0 ? std::min(res - 1, int(std::floor((p[c] - lo[c]) / ext * res))) : 0;
    }
    return Cell{v[0], v[1], v[2]};
  };
  std::map<Cell, std::pair<double, double>> h;
  for (const Vec3& p : a) h[cell(p)].first += 1.0 / double(a.size());
  for (const Vec3& p : b) h[cell(p)].second += 1.0 / double(b.size());
  double out = 0.0;
  for (const auto& [k, pq] : h) {
    const double m = 0.5 * (pq.first + pq.second);
    if (pq.first > 0) out += 0.5 * pq.first * std::log(pq.first / m);
    if (pq.second > 0) out += 0.5 * pq.second * std::log(pq.second / m);
  }
  return out;
}

// Cyclic Jacobi eigen-decomposition of a symmetric 3x3 matrix; returns the
// eigenvector of the smallest eigenvalue.
inline std::array<double, 3> smallest_eigenvector(double a[3][3]) {
  double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int sweep = 0; sweep < 60; ++sweep) {
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < 3; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < 3; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  int m = 0;
  for (int i = 1; i < 3; ++i) {
    if (a[i][i] < a[m][m]) m = i;
  }
  return {v[0][m], v[1][m], v[2][m]};
}

inline double p2f(const std::vector<Vec3>& pred, const std::vector<Vec3>& ref, std::size_t k) {
  double total = 0.0;
  for (const Vec3& p : pred) {
    const Vec3& anchor = ref[nearest(ref, p)];
    std::vector<std::size_t> idx(ref.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::partial_sort(idx.begin(), idx.begin() + std::ptrdiff_t(k), idx.end(), [&](std::size_t x, std::size_t y) {
      const float dx = squared_distance(ref[x], anchor), dy = squared_distance(ref[y], anchor);
      return dx < dy || (dx == dy && x < y);
    });
    double mean[3] = {0, 0, 0};
    for (std::size_t j = 0; j < k; ++j) {
      for (int c = 0; c < 3; ++c) mean[c] += ref[idx[j]][c] / double(k);
    }
    double cov[3][3] = {};
    for (std::size_t j = 0; j < k; ++j) {
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) cov[r][c] += (ref[idx[j]][r] - mean[r]) * (ref[idx[j]][c] - mean[c]);
      }
    }
    const auto n = smallest_eigenvector(cov);
    double dot = 0.0;
    for (int c = 0; c < 3; ++c) dot += n[c] * (double(p[c]) - double(anchor[c]));
    total += std::abs(dot);
  }
  return total / double(pred.size());
}

inline std::array<double, 4> psnr(const ColoredPointCloud& a, const ColoredPointCloud& b) {
  const auto mse = [](const ColoredPointCloud& x, const ColoredPointCloud& y) {
    std::array<double, 4> s{};
    for (std::size_t i = 0; i < x.size(); ++i) {
      const Vec3& ca = x.attributes[i];
      const Vec3& cb = y.attributes[nearest(y.positions, x.positions[i])];
      const double ya = 0.2126 * ca[0] + 0.7152 * ca[1] + 0.0722 * ca[2];
      const double yb = 0.2126 * cb[0] + 0.7152 * cb[1] + 0.0722 * cb[2];
      s[0] += std::pow(255.0 * (ya - yb), 2);
      for (int c = 0; c < 3; ++c) s[1 + c] += std::pow(255.0 * (double(ca[c]) - double(cb[c])), 2);
    }
    for (double& v : s) v /= double(x.size());
    return s;
  };
  const auto ab = mse(a, b), ba = mse(b, a);
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) {
    const double m = std::max(ab[i], ba[i]);
    out[i] = m <= 0.0 ? 100.0 : std::min(100.0, 10.0 * std::log10(255.0 * 255.0 / m));
  }
  return out;
}

}  // namespace naive

#endif  // PCUP_TESTS_ORACLES_HPP
