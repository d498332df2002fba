// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PCUP_SAMPLING_HPP
#define PCUP_SAMPLING_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "pcup/cloud.hpp"
#include "pcup/rng.hpp"

namespace pcup {

/// Greedy max-min selection. result[0] == start; each next index maximizes
/// the squared distance to the nearest already-selected point, ties going to
/// the smaller index. The per-iteration update/argmax runs under OpenMP and
/// is bit-identical to serial::farthest_point_sample for any thread count.
///
/// Throws CountTooLarge if count > n, InvalidArgument if count == 0 or
/// start >= n.
std::vector<std::size_t> farthest_point_sample(std::span<const Vec3> positions, std::size_t count,
                                               std::size_t start = 0);

/// floor(n / rate) distinct indices drawn uniformly without replacement,
/// returned in ascending order. Throws RateTooLarge if that is zero.
std::vector<std::size_t> random_downsample_indices(std::size_t n, double rate, Rng& rng);

ColoredPointCloud random_downsample(const ColoredPointCloud& cloud, double rate, Rng& rng);

namespace serial {

std::vector<std::size_t> farthest_point_sample(std::span<const Vec3> positions, std::size_t count,
                                               std::size_t start = 0);

}  // namespace serial
}  // namespace pcup

#endif  // PCUP_SAMPLING_HPP
