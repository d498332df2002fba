// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>

#include "pcup/metrics.hpp"

namespace pcup {
namespace {

std::vector<std::size_t> nearest_impl(std::span<const Vec3> queries, const SpatialIndex& index,
                                      bool parallel) {
  std::vector<std::size_t> out(queries.size());
  const auto n = std::int64_t(queries.size());
#pragma omp parallel if (parallel)
  {
    std::vector<std::pair<float, std::uint32_t>> scratch;
    std::size_t idx[1];
    float d2[1];
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      index.knn_into(queries[i], 1, idx, d2, scratch);
      out[i] = idx[0];
    }
  }
  return out;
}

}  // namespace

std::vector<std::size_t> nearest_indices(std::span<const Vec3> queries, const SpatialIndex& index) {
  return nearest_impl(queries, index, true);
}

namespace serial {

std::vector<std::size_t> nearest_indices(std::span<const Vec3> queries, const SpatialIndex& index) {
  return nearest_impl(queries, index, false);
}

}  // namespace serial
}  // namespace pcup
