// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include "pcup/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pcup/error.hpp"

namespace pcup::synthetic {
namespace {

float clamp01(double v) { return float(std::clamp(v, 0.0, 1.0)); }

}  // namespace

ColorField constant_color(const Vec3& color) {
  return [color](const Vec3&) { return color; };
}

ColorField texture(int variant) {
  const double f = 1.0 + 0.35 * variant;
  const double phase = 0.9 * variant;
  return [f, phase](const Vec3& p) {
    const double x = p.x(), y = p.y(), z = p.z();
    const double r = 0.5 + 0.3 * std::sin(5.0 * f * x + phase) + 0.15 * y;
    const double g = 0.5 + 0.35 * std::cos(4.0 * f * y - 2.0 * z + phase);
    const double stripe = std::sin(9.0 * f * (x + 0.5 * z)) > 0.0 ? 0.2 : -0.2;
    const double b = 0.5 + stripe + 0.2 * std::sin(3.0 * f * z + x);
    return Vec3(clamp01(r), clamp01(g), clamp01(b));
  };
}

std::vector<Vec3> uniform_cube(std::size_t n, Rng& rng, float side) {
  std::vector<Vec3> out(n);
  for (auto& p : out) {
    p = Vec3(float(rng.uniform01() * side), float(rng.uniform01() * side),
             float(rng.uniform01() * side));
  }
  return out;
}

ColoredPointCloud sphere(std::size_t n, Rng& rng, const ColorField& color, float radius) {
  ColoredPointCloud out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = rng.uniform(-1.0, 1.0);
    const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Vec3 p(float(radius * r * std::cos(t)), float(radius * r * std::sin(t)),
                 float(radius * z));
    out.push_back(p, color(p));
  }
  return out;
}

ColoredPointCloud wavy_sheet(std::size_t n, Rng& rng, const ColorField& color) {
  ColoredPointCloud out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform(-1.0, 1.0);
    const double y = rng.uniform(-1.0, 1.0);
    const double z = 0.08 * std::sin(3.0 * x) * std::cos(2.0 * y);
    const Vec3 p{float(x), float(y), float(z)};
    out.push_back(p, color(p));
  }
  return out;
}

ColoredPointCloud flat_grid(std::size_t side, const ColorField& color) {
  if (side < 2) fail(Errc::InvalidArgument, "grid side must be >= 2");
  ColoredPointCloud out;
  out.reserve(side * side);
  for (std::size_t j = 0; j < side; ++j) {
    for (std::size_t i = 0; i < side; ++i) {
      const Vec3 p(float(double(i) / double(side - 1)), float(double(j) / double(side - 1)), 0.0f);
      out.push_back(p, color(p));
    }
  }
  return out;
}

ColoredPointCloud make(const std::string& shape, std::size_t n, Rng& rng, const ColorField& color) {
  if (shape == "sphere") return sphere(n, rng, color);
  if (shape == "sheet") return wavy_sheet(n, rng, color);
  if (shape == "cube") {
    auto pos = uniform_cube(n, rng);
    std::vector<Vec3> attr(n);
    std::transform(pos.begin(), pos.end(), attr.begin(), color);
    return ColoredPointCloud(std::move(pos), std::move(attr));
  }
  fail(Errc::InvalidArgument, "unknown synthetic shape '" + shape + "'");
}

}  // namespace pcup::synthetic
