// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PCUP_NN_LAYERS_HPP
#define PCUP_NN_LAYERS_HPP

#include <cstddef>
#include <span>
#include <string>

#include "pcup/nn/graph.hpp"
#include "pcup/nn/parameters.hpp"
#include "pcup/rng.hpp"

namespace pcup::nn {

/// Registers `prefix.weight` [in,out] and `prefix.bias` [out]. Weights are
/// uniform in +-sqrt(6/(in+out)), biases zero; `zero` zeroes both.
void init_linear(ParameterStore& store, const std::string& prefix, std::size_t in,
                 std::size_t out, Rng& rng, bool zero = false);

/// widths = {in, hidden..., out}; layer i is `prefix.i`.
void init_mlp(ParameterStore& store, const std::string& prefix,
              std::span<const std::size_t> widths, Rng& rng, bool zero_last = false);

/// `prefix.dense.i` for each dense layer and `prefix.fuse` back to `channels`.
void init_rdb(ParameterStore& store, const std::string& prefix, std::size_t channels,
              std::size_t layers, std::size_t growth, Rng& rng, bool zero_fusion = false);

template <typename T>
VarT<T> linear_layer(GraphT<T>& g, const ParameterStoreT<T>& store, const std::string& prefix,
                     VarT<T> x);

/// Shared per-row MLP; ReLU between layers, last layer linear. The depth is
/// read from the store.
template <typename T>
VarT<T> mlp_forward(GraphT<T>& g, const ParameterStoreT<T>& store, const std::string& prefix,
                    VarT<T> x);

/// Residual dense block.
template <typename T>
VarT<T> rdb_forward(GraphT<T>& g, const ParameterStoreT<T>& store, const std::string& prefix,
                    VarT<T> x);

/// Gradient-free conveniences.
Tensor mlp_forward(const ParameterStore& store, const std::string& prefix, const Tensor& input);
Tensor rdb_forward(const ParameterStore& store, const std::string& prefix, const Tensor& input);

std::size_t mlp_depth(const ParameterStore& store, const std::string& prefix);

}  // namespace pcup::nn

#endif  // PCUP_NN_LAYERS_HPP
