// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include "pcup/nn/networks.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pcup/coarse.hpp"
#include "pcup/error.hpp"
#include "pcup/kdtree.hpp"
#include "pcup/nn/layers.hpp"

namespace pcup::nn {
namespace {

constexpr double kEpsilon = 1e-8;

std::string stage(std::size_t s) { return "dlai.stage" + std::to_string(s); }

IndexList to_index_list(std::span<const std::size_t> v) {
  return std::make_shared<const std::vector<std::uint32_t>>(v.begin(), v.end());
}

void add_dlai_tables(PatchContext& ctx, const ColoredPointCloud& sparse,
                     std::span<const Vec3> dense, std::size_t k1) {
  if (k1 > sparse.size()) {
    fail(Errc::KTooLarge, "k1=" + std::to_string(k1) + " exceeds patch of " +
                              std::to_string(sparse.size()) + " points");
  }
  const SpatialIndex index(sparse.positions);
  ctx.sparse_knn = to_index_list(knn_batch(index, sparse.positions, k1).indices);
  const KnnTable interp = knn_batch(index, dense, k1);
  ctx.interp_index = to_index_list(interp.indices);
  std::vector<float> w(interp.indices.size());
  for (std::size_t j = 0; j < dense.size(); ++j) {
    const auto d2 = interp.row_sq(j);
    float* wj = w.data() + j * k1;
    if (std::sqrt(double(d2[0])) <= kEpsilon) {
      wj[0] = 1.0f;
      continue;
    }
    double sum = 0.0;
    std::vector<double> raw(k1);
    for (std::size_t i = 0; i < k1; ++i) {
      raw[i] = 1.0 / (std::sqrt(double(d2[i])) + kEpsilon);
      sum += raw[i];
    }
    for (std::size_t i = 0; i < k1; ++i) wj[i] = float(raw[i] / sum);
  }
  ctx.interp_weight = std::make_shared<const std::vector<float>>(std::move(w));
}

void add_aem_tables(PatchContext& ctx, std::span<const Vec3> dense, std::size_t k2) {
  const std::size_t n = dense.size();
  if (k2 > n) {
    fail(Errc::KTooLarge, "k2=" + std::to_string(k2) + " exceeds " + std::to_string(n) +
                              " dense points");
  }
  // Offsets are divided by the patch radius so the network sees the same
  // scale regardless of world units.
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  for (const Vec3& p : dense) center += p.cast<double>();
  center /= double(dense.size());
  double radius = 0.0;
  for (const Vec3& p : dense) radius = std::max(radius, (p.cast<double>() - center).norm());
  const double inv = radius > 1e-12 ? 1.0 / radius : 1.0;

  const SpatialIndex index(dense);
  const KnnTable table = knn_batch(index, dense, k2);
  ctx.dense_knn = to_index_list(table.indices);
  std::vector<std::uint32_t> self(n * k2);
  Tensor offsets({n * k2, 3});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k2; ++j) {
      const std::size_t r = i * k2 + j;
      self[r] = std::uint32_t(i);
      const Vec3& q = dense[table.indices[r]];
      for (int c = 0; c < 3; ++c) {
        offsets.at(r, c) = float((double(dense[i][c]) - double(q[c])) * inv);
      }
    }
  }
  ctx.dense_self = std::make_shared<const std::vector<std::uint32_t>>(std::move(self));
  ctx.offsets = std::move(offsets);
}

template <typename T>
std::shared_ptr<const T> share(T v) {
  return std::make_shared<const T>(std::move(v));
}

}  // namespace

void NetworkConfig::validate() const {
  if (k1 == 0 || k2 == 0 || feature_width == 0 || rdb_layers == 0 || rdb_growth == 0 ||
      patch_size == 0 || rate < 1 || dlai_channels.empty()) {
    fail(Errc::InvalidArgument, "network configuration values must be positive");
  }
  for (std::size_t c : dlai_channels) {
    if (c == 0) fail(Errc::InvalidArgument, "DLAI channel widths must be positive");
  }
  if (k2 > patch_size * std::size_t(rate)) {
    fail(Errc::KTooLarge, "k2=" + std::to_string(k2) + " exceeds m*R=" +
                              std::to_string(patch_size * std::size_t(rate)));
  }
  if (k1 > patch_size) fail(Errc::KTooLarge, "k1 exceeds patch size");
}

void init_dlai(ParameterStore& store, const NetworkConfig& cfg, Rng& rng, bool zero_head) {
  cfg.validate();
  std::size_t in = 3;
  for (std::size_t s = 0; s < cfg.dlai_channels.size(); ++s) {
    const std::size_t ch = cfg.dlai_channels[s];
    init_linear(store, stage(s) + ".conv", in, ch, rng);
    init_rdb(store, stage(s) + ".rdb", ch, cfg.rdb_layers, cfg.rdb_growth, rng);
    in = ch;
  }
  const std::size_t head[] = {in, cfg.feature_width, 3};
  init_mlp(store, "dlai.head", head, rng, zero_head);
}

void init_aem(ParameterStore& store, const NetworkConfig& cfg, Rng& rng, bool zero_head) {
  cfg.validate();
  const std::size_t C = cfg.feature_width;
  const std::size_t pos[] = {3, C, C};
  const std::size_t attr[] = {3, C, C};
  const std::size_t hidden[] = {C + 6, C, C};
  const std::size_t head[] = {C, C, 3};
  init_mlp(store, "aem.weight", pos, rng);
  init_mlp(store, "aem.pattern", attr, rng);
  init_mlp(store, "aem.local", hidden, rng);
  init_mlp(store, "aem.pool", hidden, rng);
  init_linear(store, "aem.fuse", C, C, rng);
  init_mlp(store, "aem.head", head, rng, zero_head);
}

ParameterStore init_model(const ModelSpec& spec, Rng& rng, bool zero_heads) {
  ParameterStore store;
  if (spec.dlai) init_dlai(store, spec.net, rng, zero_heads);
  if (spec.aem) init_aem(store, spec.net, rng, zero_heads);
  return store;
}

template <typename T>
template <typename U>
PatchContextT<U> PatchContextT<T>::cast() const {
  PatchContextT<U> out;
  out.sparse_count = sparse_count;
  out.dense_count = dense_count;
  out.sparse_attributes = sparse_attributes.template cast<U>();
  out.coarse = coarse.template cast<U>();
  out.sparse_knn = sparse_knn;
  out.interp_index = interp_index;
  if (interp_weight) {
    out.interp_weight =
        share(std::vector<U>(interp_weight->begin(), interp_weight->end()));
  }
  out.dense_knn = dense_knn;
  out.dense_self = dense_self;
  out.offsets = offsets.template cast<U>();
  return out;
}

template PatchContextT<double> PatchContextT<float>::cast<double>() const;
template PatchContextT<float> PatchContextT<float>::cast<float>() const;

Tensor to_tensor(std::span<const Vec3> rows) {
  Tensor t({rows.size(), 3});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int c = 0; c < 3; ++c) t.at(i, c) = rows[i][c];
  }
  return t;
}

std::vector<Vec3> to_points(const Tensor& t, bool clamp) {
  if (t.cols() != 3) fail(Errc::ShapeMismatch, "expected 3 columns, got " + shape_string(t.shape()));
  std::vector<Vec3> out(t.rows());
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      const float v = t.at(i, c);
      out[i][c] = clamp ? std::clamp(v, 0.0f, 1.0f) : v;
    }
  }
  return out;
}

PatchContext prepare_patch(const ColoredPointCloud& sparse, std::span<const Vec3> dense_positions,
                           const ModelSpec& spec) {
  spec.net.validate();
  sparse.validate();
  check_positions(dense_positions);
  PatchContext ctx;
  ctx.sparse_count = sparse.size();
  ctx.dense_count = dense_positions.size();
  ctx.sparse_attributes = to_tensor(sparse.attributes);
  if (spec.dlai) {
    add_dlai_tables(ctx, sparse, dense_positions, spec.net.k1);
  } else {
    GdwaiConfig g;
    g.k1 = spec.net.k1;
    ctx.coarse = to_tensor(gdwai(dense_positions, sparse, g));
  }
  if (spec.aem) add_aem_tables(ctx, dense_positions, spec.net.k2);
  return ctx;
}

template <typename T>
VarT<T> dlai_graph(GraphT<T>& g, const ParameterStoreT<T>& store, const PatchContextT<T>& ctx,
                   const NetworkConfig& cfg) {
  if (!ctx.sparse_knn || !ctx.interp_index) {
    fail(Errc::InvalidArgument, "patch context was prepared without DLAI tables");
  }
  const std::size_t k1 = cfg.k1;
  if (ctx.sparse_knn->size() != ctx.sparse_count * k1) {
    fail(Errc::ShapeMismatch, "patch context k1 differs from the network's");
  }
  VarT<T> x = g.constant(ctx.sparse_attributes);
  for (std::size_t s = 0; s < cfg.dlai_channels.size(); ++s) {
    x = relu(linear_layer(g, store, stage(s) + ".conv", x));
    x = rdb_forward(g, store, stage(s) + ".rdb", x);
    x = group_max(gather_rows(x, ctx.sparse_knn), k1);
  }
  VarT<T> f = group_weighted_sum(gather_rows(x, ctx.interp_index), ctx.interp_weight, k1);
  return mlp_forward(g, store, std::string("dlai.head"), f);
}

template <typename T>
VarT<T> aem_graph(GraphT<T>& g, const ParameterStoreT<T>& store, const PatchContextT<T>& ctx,
                  const NetworkConfig& cfg, VarT<T> coarse) {
  if (!ctx.dense_knn) fail(Errc::InvalidArgument, "patch context was prepared without AEM tables");
  const std::size_t K = cfg.k2;
  if (ctx.dense_knn->size() != ctx.dense_count * K) {
    fail(Errc::ShapeMismatch, "patch context k2 differs from the network's");
  }
  if (coarse.value().rows() != ctx.dense_count || coarse.value().cols() != 3) {
    fail(Errc::ShapeMismatch, "coarse attributes " + shape_string(coarse.value().shape()) +
                                  " do not match " + std::to_string(ctx.dense_count) + " points");
  }
  VarT<T> weight = mlp_forward(g, store, std::string("aem.weight"), g.constant(ctx.offsets));
  VarT<T> pattern = mlp_forward(g, store, std::string("aem.pattern"), coarse);
  VarT<T> f2 = gather_rows(pattern, ctx.dense_knn);
  VarT<T> f1 = gather_rows(coarse, ctx.dense_knn);
  VarT<T> center = gather_rows(coarse, ctx.dense_self);
  VarT<T> f3 = concat_cols({sub(f1, center), f1});
  VarT<T> h = concat_cols({f2, f3});
  VarT<T> local = mlp_forward(g, store, std::string("aem.local"), h);
  VarT<T> pooled = group_max(mlp_forward(g, store, std::string("aem.pool"), h), K);
  VarT<T> fused = group_mean(linear_layer(g, store, "aem.fuse", mul(weight, local)), K);
  VarT<T> enhanced = add(pooled, fused);
  return add(coarse, mlp_forward(g, store, std::string("aem.head"), enhanced));
}

template <typename T>
VarT<T> model_graph(GraphT<T>& g, const ParameterStoreT<T>& store, const PatchContextT<T>& ctx,
                    const ModelSpec& spec) {
  VarT<T> coarse = spec.dlai ? dlai_graph(g, store, ctx, spec.net) : g.constant(ctx.coarse);
  return spec.aem ? aem_graph(g, store, ctx, spec.net, coarse) : coarse;
}

std::vector<Vec3> dlai_forward(const ParameterStore& store, const ColoredPointCloud& sparse,
                               std::span<const Vec3> dense_positions, const NetworkConfig& cfg) {
  ModelSpec spec{true, false, cfg};
  const PatchContext ctx = prepare_patch(sparse, dense_positions, spec);
  Graph g(false);
  return to_points(dlai_graph(g, store, ctx, cfg).value(), true);
}

std::vector<Vec3> aem_forward(const ParameterStore& store, std::span<const Vec3> coarse,
                              std::span<const Vec3> dense_positions, const NetworkConfig& cfg) {
  cfg.validate();
  if (coarse.size() != dense_positions.size()) {
    fail(Errc::ShapeMismatch, "coarse attributes and positions differ in length");
  }
  check_positions(dense_positions);
  PatchContext ctx;
  ctx.dense_count = dense_positions.size();
  add_aem_tables(ctx, dense_positions, cfg.k2);
  Graph g(false);
  return to_points(aem_graph(g, store, ctx, cfg, g.constant(to_tensor(coarse))).value(), false);
}

std::vector<Vec3> predict_attributes(const ParameterStore& store, const ModelSpec& spec,
                                     const ColoredPointCloud& sparse,
                                     std::span<const Vec3> dense_positions) {
  const PatchContext ctx = prepare_patch(sparse, dense_positions, spec);
  Graph g(false);
  return to_points(model_graph(g, store, ctx, spec).value(), true);
}

#define PCUP_INSTANTIATE_NETWORKS(T)                                                          \
  template VarT<T> dlai_graph<T>(GraphT<T>&, const ParameterStoreT<T>&,                       \
                                 const PatchContextT<T>&, const NetworkConfig&);              \
  template VarT<T> aem_graph<T>(GraphT<T>&, const ParameterStoreT<T>&,                        \
                                const PatchContextT<T>&, const NetworkConfig&, VarT<T>);      \
  template VarT<T> model_graph<T>(GraphT<T>&, const ParameterStoreT<T>&,                      \
                                  const PatchContextT<T>&, const ModelSpec&);

PCUP_INSTANTIATE_NETWORKS(float)
PCUP_INSTANTIATE_NETWORKS(double)

#undef PCUP_INSTANTIATE_NETWORKS

}  // namespace pcup::nn
