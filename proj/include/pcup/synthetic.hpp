// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PCUP_SYNTHETIC_HPP
#define PCUP_SYNTHETIC_HPP

#include <cstddef>
#include <functional>
#include <string>

#include "pcup/cloud.hpp"
#include "pcup/rng.hpp"

// Synthetic colored clouds for tests, benchmarks and the `generate` command.
namespace pcup::synthetic {

using ColorField = std::function<Vec3(const Vec3&)>;

ColorField constant_color(const Vec3& color);

/// Smooth gradients plus sinusoidal stripes; varies with `variant` so that
/// training and held-out fixtures can differ. Channels stay inside [0,1].
ColorField texture(int variant = 0);

std::vector<Vec3> uniform_cube(std::size_t n, Rng& rng, float side = 1.0f);

/// Uniform on the sphere surface.
ColoredPointCloud sphere(std::size_t n, Rng& rng, const ColorField& color, float radius = 1.0f);

/// Height field z = 0.08 sin(3x) cos(2y) over [-1,1]^2, uniformly sampled.
ColoredPointCloud wavy_sheet(std::size_t n, Rng& rng, const ColorField& color);

/// side x side regular grid on z = 0 spanning [0,1]^2.
ColoredPointCloud flat_grid(std::size_t side, const ColorField& color);

/// Dispatches on "sphere", "sheet", "cube" (uniform volume).
ColoredPointCloud make(const std::string& shape, std::size_t n, Rng& rng, const ColorField& color);

}  // namespace pcup::synthetic

#endif  // PCUP_SYNTHETIC_HPP
