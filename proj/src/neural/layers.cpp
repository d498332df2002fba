// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include "pcup/nn/layers.hpp"

#include <cmath>
#include <vector>

#include "pcup/error.hpp"

namespace pcup::nn {
namespace {

std::string layer_name(const std::string& prefix, std::size_t i) {
  return prefix + "." + std::to_string(i);
}

template <typename T>
std::size_t depth(const ParameterStoreT<T>& store, const std::string& prefix) {
  std::size_t n = 0;
  while (store.contains(layer_name(prefix, n) + ".weight")) ++n;
  return n;
}

template <typename T>
std::size_t dense_layers(const ParameterStoreT<T>& store, const std::string& prefix) {
  return depth(store, prefix + ".dense");
}

}  // namespace

void init_linear(ParameterStore& store, const std::string& prefix, std::size_t in,
                 std::size_t out, Rng& rng, bool zero) {
  if (in == 0 || out == 0) fail(Errc::InvalidArgument, "layer widths must be positive");
  Tensor w({in, out});
  if (!zero) {
    const double bound = std::sqrt(6.0 / double(in + out));
    for (float& v : w.values()) v = float(rng.uniform(-bound, bound));
  }
  store.add(prefix + ".weight", std::move(w));
  store.add(prefix + ".bias", Tensor({out}));
}

void init_mlp(ParameterStore& store, const std::string& prefix,
              std::span<const std::size_t> widths, Rng& rng, bool zero_last) {
  if (widths.size() < 2) fail(Errc::InvalidArgument, "an MLP needs at least two widths");
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    const bool last = i + 2 == widths.size();
    init_linear(store, layer_name(prefix, i), widths[i], widths[i + 1], rng, last && zero_last);
  }
}

void init_rdb(ParameterStore& store, const std::string& prefix, std::size_t channels,
              std::size_t layers, std::size_t growth, Rng& rng, bool zero_fusion) {
  if (layers == 0 || growth == 0) fail(Errc::InvalidArgument, "RDB needs layers and growth");
  std::size_t width = channels;
  for (std::size_t i = 0; i < layers; ++i) {
    init_linear(store, layer_name(prefix + ".dense", i), width, growth, rng);
    width += growth;
  }
  init_linear(store, prefix + ".fuse", width, channels, rng, zero_fusion);
}

template <typename T>
VarT<T> linear_layer(GraphT<T>& g, const ParameterStoreT<T>& store, const std::string& prefix,
                     VarT<T> x) {
  return linear(x, store.bind(g, prefix + ".weight"), store.bind(g, prefix + ".bias"));
}

template <typename T>
VarT<T> mlp_forward(GraphT<T>& g, const ParameterStoreT<T>& store, const std::string& prefix,
                    VarT<T> x) {
  const std::size_t n = depth(store, prefix);
  if (n == 0) fail(Errc::InvalidArgument, "no MLP named '" + prefix + "'");
  for (std::size_t i = 0; i < n; ++i) {
    x = linear_layer(g, store, layer_name(prefix, i), x);
    if (i + 1 < n) x = relu(x);
  }
  return x;
}

template <typename T>
VarT<T> rdb_forward(GraphT<T>& g, const ParameterStoreT<T>& store, const std::string& prefix,
                    VarT<T> x) {
  const std::size_t n = dense_layers(store, prefix);
  if (n == 0) fail(Errc::InvalidArgument, "no RDB named '" + prefix + "'");
  const std::size_t channels = store.get(prefix + ".fuse.bias").numel();
  if (x.value().cols() != channels) {
    fail(Errc::ShapeMismatch, "RDB '" + prefix + "' expects " + std::to_string(channels) +
                                  " channels, got " + std::to_string(x.value().cols()));
  }
  std::vector<VarT<T>> feats{x};
  for (std::size_t i = 0; i < n; ++i) {
    VarT<T> in = feats.size() == 1 ? x : concat_cols(std::span<const VarT<T>>(feats));
    feats.push_back(relu(linear_layer(g, store, layer_name(prefix + ".dense", i), in)));
  }
  VarT<T> fused =
      linear_layer(g, store, prefix + ".fuse", concat_cols(std::span<const VarT<T>>(feats)));
  return add(x, fused);
}

Tensor mlp_forward(const ParameterStore& store, const std::string& prefix, const Tensor& input) {
  Graph g(false);
  return mlp_forward(g, store, prefix, g.constant(input)).value();
}

Tensor rdb_forward(const ParameterStore& store, const std::string& prefix, const Tensor& input) {
  Graph g(false);
  return rdb_forward(g, store, prefix, g.constant(input)).value();
}

std::size_t mlp_depth(const ParameterStore& store, const std::string& prefix) {
  return depth(store, prefix);
}

#define PCUP_INSTANTIATE_LAYERS(T)                                                            \
  template VarT<T> linear_layer<T>(GraphT<T>&, const ParameterStoreT<T>&, const std::string&, \
                                   VarT<T>);                                                  \
  template VarT<T> mlp_forward<T>(GraphT<T>&, const ParameterStoreT<T>&, const std::string&,  \
                                  VarT<T>);                                                   \
  template VarT<T> rdb_forward<T>(GraphT<T>&, const ParameterStoreT<T>&, const std::string&,  \
                                  VarT<T>);

PCUP_INSTANTIATE_LAYERS(float)
PCUP_INSTANTIATE_LAYERS(double)

#undef PCUP_INSTANTIATE_LAYERS

}  // namespace pcup::nn
