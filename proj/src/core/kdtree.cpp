// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include "pcup/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pcup/error.hpp"

namespace pcup {
namespace {

constexpr std::uint32_t kLeafSize = 12;

using Candidate = std::pair<float, std::uint32_t>;

// Lexicographic on (squared distance, source index): the heap top is the
// current worst neighbor.
struct WorseFirst {
  bool operator()(const Candidate& a, const Candidate& b) const { return a < b; }
};

void offer(std::vector<Candidate>& heap, std::size_t k, float d2, std::uint32_t idx) {
  if (heap.size() < k) {
    heap.emplace_back(d2, idx);
    std::push_heap(heap.begin(), heap.end(), WorseFirst{});
  } else if (Candidate(d2, idx) < heap.front()) {
    std::pop_heap(heap.begin(), heap.end(), WorseFirst{});
    heap.back() = {d2, idx};
    std::push_heap(heap.begin(), heap.end(), WorseFirst{});
  }
}

void check_k(std::size_t k, std::size_t n) {
  if (k == 0) fail(Errc::InvalidArgument, "k must be positive");
  if (k > n) {
    fail(Errc::KTooLarge, "k=" + std::to_string(k) + " exceeds point count " + std::to_string(n));
  }
}

}  // namespace

SpatialIndex::SpatialIndex(std::span<const Vec3> positions) {
  check_positions(positions);
  if (positions.size() >= std::numeric_limits<std::uint32_t>::max()) {
    fail(Errc::InvalidArgument, "point set too large for 32-bit indexing");
  }
  const auto n = std::uint32_t(positions.size());
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0u);
  points_.assign(positions.begin(), positions.end());
  nodes_.reserve(2 * (n / kLeafSize + 1));
  build(0, n);

  std::vector<Vec3> reordered(n);
  rank_.resize(n);
  for (std::uint32_t slot = 0; slot < n; ++slot) {
    reordered[slot] = positions[order_[slot]];
    rank_[order_[slot]] = slot;
  }
  points_ = std::move(reordered);
}

std::int32_t SpatialIndex::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = std::int32_t(nodes_.size());
  nodes_.push_back(Node{begin, end});
  if (end - begin <= kLeafSize) return id;

  Vec3 lo = points_[order_[begin]];
  Vec3 hi = lo;
  for (std::uint32_t i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  Eigen::Index axis = 0;
  const float spread = (hi - lo).maxCoeff(&axis);
  if (spread <= 0.0f) return id;  // all coincident: keep as one leaf

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     return points_[a][axis] < points_[b][axis];
                   });
  const float split = points_[order_[mid]][axis];
  const std::int32_t left = build(begin, mid);
  const std::int32_t right = build(mid, end);
  Node& node = nodes_[id];
  node.left = left;
  node.right = right;
  node.split = split;
  node.axis = std::uint8_t(axis);
  return id;
}

void SpatialIndex::search(std::int32_t id, const Vec3& query, std::size_t k,
                          std::vector<Candidate>& heap) const {
  const Node& node = nodes_[id];
  if (node.left < 0) {
    for (std::uint32_t slot = node.begin; slot < node.end; ++slot) {
      offer(heap, k, squared_distance(query, points_[slot]), order_[slot]);
    }
    return;
  }
  // Left holds coordinates <= split, right >= split. Equality is not pruned
  // so that an equidistant point with a smaller index is still found.
  const float diff = query[node.axis] - node.split;
  const std::int32_t near = diff < 0.0f ? node.left : node.right;
  const std::int32_t far = diff < 0.0f ? node.right : node.left;
  search(near, query, k, heap);
  if (heap.size() < k || diff * diff <= heap.front().first) {
    search(far, query, k, heap);
  }
}

void SpatialIndex::knn_into(const Vec3& query, std::size_t k, std::span<std::size_t> indices,
                            std::span<float> sq_dist, std::vector<Candidate>& scratch) const {
  check_k(k, size());
  scratch.clear();
  scratch.reserve(k);
  search(0, query, k, scratch);
  std::sort_heap(scratch.begin(), scratch.end(), WorseFirst{});
  for (std::size_t i = 0; i < k; ++i) {
    indices[i] = scratch[i].second;
    sq_dist[i] = scratch[i].first;
  }
}

NeighborSet SpatialIndex::knn(const Vec3& query, std::size_t k) const {
  check_k(k, size());
  NeighborSet out;
  out.indices.resize(k);
  out.distances.resize(k);
  std::vector<Candidate> scratch;
  knn_into(query, k, out.indices, out.distances, scratch);
  for (float& d : out.distances) d = std::sqrt(d);
  return out;
}

std::size_t SpatialIndex::nearest(const Vec3& query) const {
  std::vector<Candidate> scratch;
  scratch.reserve(1);
  search(0, query, 1, scratch);
  return scratch.front().second;
}

SpatialIndex build_index(std::span<const Vec3> positions) { return SpatialIndex(positions); }

NeighborSet knn(const SpatialIndex& index, const Vec3& query, std::size_t k) {
  return index.knn(query, k);
}

KnnTable knn_batch(const SpatialIndex& index, std::span<const Vec3> queries, std::size_t k) {
  check_k(k, index.size());
  KnnTable table;
  table.k = k;
  table.indices.resize(queries.size() * k);
  table.sq_distances.resize(queries.size() * k);
  const auto nq = std::int64_t(queries.size());
#pragma omp parallel
  {
    std::vector<Candidate> scratch;
#pragma omp for schedule(static)
    for (std::int64_t q = 0; q < nq; ++q) {
      index.knn_into(queries[q], k, {table.indices.data() + q * k, k},
                     {table.sq_distances.data() + q * k, k}, scratch);
    }
  }
  return table;
}

namespace serial {

NeighborSet brute_force_knn(std::span<const Vec3> points, const Vec3& query, std::size_t k) {
  check_positions(points);
  check_k(k, points.size());
  std::vector<Candidate> all(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    all[i] = {squared_distance(query, points[i]), std::uint32_t(i)};
  }
  std::partial_sort(all.begin(), all.begin() + std::ptrdiff_t(k), all.end());
  NeighborSet out;
  out.indices.resize(k);
  out.distances.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.indices[i] = all[i].second;
    out.distances[i] = std::sqrt(all[i].first);
  }
  return out;
}

KnnTable brute_force_knn_batch(std::span<const Vec3> points, std::span<const Vec3> queries,
                               std::size_t k) {
  check_positions(points);
  check_k(k, points.size());
  KnnTable table;
  table.k = k;
  table.indices.resize(queries.size() * k);
  table.sq_distances.resize(queries.size() * k);
  std::vector<Candidate> all(points.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      all[i] = {squared_distance(queries[q], points[i]), std::uint32_t(i)};
    }
    std::partial_sort(all.begin(), all.begin() + std::ptrdiff_t(k), all.end());
    for (std::size_t i = 0; i < k; ++i) {
      table.indices[q * k + i] = all[i].second;
      table.sq_distances[q * k + i] = all[i].first;
    }
  }
  return table;
}

}  // namespace serial
}  // namespace pcup
