// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PCUP_KDTREE_HPP
#define PCUP_KDTREE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pcup/cloud.hpp"

namespace pcup {

/// Result of one k-NN query: ascending Euclidean distances, ties broken by
/// ascending source index.
struct NeighborSet {
  std::vector<std::size_t> indices;
  std::vector<float> distances;

  std::size_t size() const { return indices.size(); }
};

/// Balanced k-d tree over a copy of the input positions.
///
/// Immutable after construction; concurrent queries are safe. Queries are
/// exact: they return the same neighbors, in the same order, as a full scan
/// using squared_distance() with (distance, index) ordering.
class SpatialIndex {
 public:
  explicit SpatialIndex(std::span<const Vec3> positions);

  std::size_t size() const { return points_.size(); }

  /// Position of source point `i` (original numbering).
  const Vec3& point(std::size_t i) const { return points_[rank_[i]]; }

  NeighborSet knn(const Vec3& query, std::size_t k) const;

  /// Allocation-free variant: fills `indices` and `sq_dist` (length k) in
  /// ascending (distance, index) order. `scratch` is reused across calls.
  void knn_into(const Vec3& query, std::size_t k, std::span<std::size_t> indices,
                std::span<float> sq_dist,
                std::vector<std::pair<float, std::uint32_t>>& scratch) const;

  std::size_t nearest(const Vec3& query) const;

 private:
  struct Node {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    float split = 0.0f;
    std::uint8_t axis = 0;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  void search(std::int32_t node, const Vec3& query, std::size_t k,
              std::vector<std::pair<float, std::uint32_t>>& heap) const;

  std::vector<Vec3> points_;          // tree order
  std::vector<std::uint32_t> order_;  // tree slot -> source index
  std::vector<std::uint32_t> rank_;   // source index -> tree slot
  std::vector<Node> nodes_;
};

/// Throws EmptyInput / NonFinite.
SpatialIndex build_index(std::span<const Vec3> positions);

/// Throws KTooLarge if k > index.size(), InvalidArgument if k == 0.
NeighborSet knn(const SpatialIndex& index, const Vec3& query, std::size_t k);

/// Row-major k-NN table for a batch of queries.
struct KnnTable {
  std::size_t k = 0;
  std::vector<std::size_t> indices;  // queries.size() * k
  std::vector<float> sq_distances;   // queries.size() * k

  std::size_t rows() const { return k == 0 ? 0 : indices.size() / k; }
  std::span<const std::size_t> row(std::size_t q) const {
    return {indices.data() + q * k, k};
  }
  std::span<const float> row_sq(std::size_t q) const {
    return {sq_distances.data() + q * k, k};
  }
};

/// OpenMP-parallel over queries.
KnnTable knn_batch(const SpatialIndex& index, std::span<const Vec3> queries, std::size_t k);

namespace serial {

/// Exhaustive O(n) scan per query; reference for the tree.
NeighborSet brute_force_knn(std::span<const Vec3> points, const Vec3& query, std::size_t k);

KnnTable brute_force_knn_batch(std::span<const Vec3> points, std::span<const Vec3> queries,
                               std::size_t k);

}  // namespace serial
}  // namespace pcup

#endif  // PCUP_KDTREE_HPP
