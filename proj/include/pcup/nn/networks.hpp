// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PCUP_NN_NETWORKS_HPP
#define PCUP_NN_NETWORKS_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "pcup/cloud.hpp"
#include "pcup/nn/graph.hpp"
#include "pcup/nn/parameters.hpp"
#include "pcup/rng.hpp"

namespace pcup::nn {

struct NetworkConfig {
  std::size_t k1 = 2;
  std::size_t k2 = 32;
  std::size_t feature_width = 64;  // C
  std::vector<std::size_t> dlai_channels{32, 64, 128, 128};
  std::size_t rdb_layers = 3;
  std::size_t rdb_growth = 32;
  std::size_t patch_size = 256;  // m
  int rate = 4;                  // R

  void validate() const;
  bool operator==(const NetworkConfig&) const = default;
};

enum NetworkBits : std::uint32_t { kDlaiBit = 1u, kAemBit = 2u };

/// Which learned parts a model has. Without DLAI the coarse attributes come
/// from distance-weighted interpolation.
struct ModelSpec {
  bool dlai = false;
  bool aem = true;
  NetworkConfig net;

  std::uint32_t network_id() const {
    return (dlai ? kDlaiBit : 0u) | (aem ? kAemBit : 0u);
  }
  bool learnable() const { return dlai || aem; }
  bool operator==(const ModelSpec&) const = default;
};

void init_dlai(ParameterStore& store, const NetworkConfig& cfg, Rng& rng, bool zero_head = true);
void init_aem(ParameterStore& store, const NetworkConfig& cfg, Rng& rng, bool zero_head = true);
ParameterStore init_model(const ModelSpec& spec, Rng& rng, bool zero_heads = true);

/// Parameter-independent data of one patch: neighbor tables, interpolation
/// weights and scale-normalized offsets.
template <typename T>
struct PatchContextT {
  std::size_t sparse_count = 0;
  std::size_t dense_count = 0;
  TensorT<T> sparse_attributes;  // [m,3]
  TensorT<T> coarse;             // [n,3] interpolated, only without DLAI
  IndexList sparse_knn;          // m*k1, among sparse points
  IndexList interp_index;        // n*k1, sparse neighbors of dense points
  std::shared_ptr<const std::vector<T>> interp_weight;  // n*k1, rows sum to 1
  IndexList dense_knn;           // n*k2, among dense points
  IndexList dense_self;          // n*k2, i repeated k2 times
  TensorT<T> offsets;            // [n*k2,3] (p_i - p_j) / scale

  template <typename U>
  PatchContextT<U> cast() const;
};

using PatchContext = PatchContextT<float>;

PatchContext prepare_patch(const ColoredPointCloud& sparse, std::span<const Vec3> dense_positions,
                           const ModelSpec& spec);

/// Graph builders. `coarse` is the attribute estimate AEM refines.
template <typename T>
VarT<T> dlai_graph(GraphT<T>& g, const ParameterStoreT<T>& store, const PatchContextT<T>& ctx,
                   const NetworkConfig& cfg);
template <typename T>
VarT<T> aem_graph(GraphT<T>& g, const ParameterStoreT<T>& store, const PatchContextT<T>& ctx,
                  const NetworkConfig& cfg, VarT<T> coarse);
/// Coarse stage (DLAI or interpolation) followed by AEM when enabled.
template <typename T>
VarT<T> model_graph(GraphT<T>& g, const ParameterStoreT<T>& store, const PatchContextT<T>& ctx,
                    const ModelSpec& spec);

/// DLAI alone, clamped to [0,1].
std::vector<Vec3> dlai_forward(const ParameterStore& store, const ColoredPointCloud& sparse,
                               std::span<const Vec3> dense_positions, const NetworkConfig& cfg);

/// AEM alone; no clamp.
std::vector<Vec3> aem_forward(const ParameterStore& store, std::span<const Vec3> coarse,
                              std::span<const Vec3> dense_positions, const NetworkConfig& cfg);

/// Full attribute prediction for one patch, clamped to [0,1].
std::vector<Vec3> predict_attributes(const ParameterStore& store, const ModelSpec& spec,
                                     const ColoredPointCloud& sparse,
                                     std::span<const Vec3> dense_positions);

TensorT<float> to_tensor(std::span<const Vec3> rows);
std::vector<Vec3> to_points(const TensorT<float>& t, bool clamp);

}  // namespace pcup::nn

#endif  // PCUP_NN_NETWORKS_HPP
