// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include "pcup/nn/train.hpp"

#include <cmath>
#include <cstdint>
#include <exception>
#include <numeric>

#include "pcup/error.hpp"
#include "pcup/metrics.hpp"

namespace pcup::nn {

double mae_loss(std::span<const Vec3> pred, std::span<const Vec3> target) {
  if (pred.size() != target.size()) {
    fail(Errc::ShapeMismatch, "prediction has " + std::to_string(pred.size()) +
                                  " rows, target " + std::to_string(target.size()));
  }
  if (pred.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (int c = 0; c < 3; ++c) acc += std::abs(double(pred[i][c]) - double(target[i][c]));
  }
  return acc / double(3 * pred.size());
}

double chamfer_loss(std::span<const Vec3> pred, std::span<const Vec3> target) {
  return chamfer(pred, target);
}

TrainingPair transform_pair(const TrainingPair& pair, double scale, double sigma, Rng& rng) {
  TrainingPair out = pair;
  for (Vec3& p : out.dense.positions) {
    for (int c = 0; c < 3; ++c) {
      double v = scale * double(p[c]);
      if (sigma > 0.0) v += sigma * rng.normal();
      p[c] = float(v);
    }
  }
  const auto& src = out.sparse.source_indices;
  if (src.size() != out.sparse.cloud.size()) {
    fail(Errc::InvalidArgument, "training pair lacks sparse-to-dense correspondence");
  }
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i] >= out.dense.size()) fail(Errc::InvalidArgument, "sparse index out of range");
    out.sparse.cloud.positions[i] = out.dense.positions[src[i]];
  }
  return out;
}

TrainingPair augment(const TrainingPair& pair, Rng& rng, const AugmentConfig& cfg) {
  const double scale = rng.uniform(cfg.scale_min, cfg.scale_max);
  const double sigma = cfg.jitter * double(bounds_of(pair.dense.positions).diagonal()) * scale;
  return transform_pair(pair, scale, sigma, rng);
}

std::size_t default_batch(int rate) { return rate <= 12 ? 40 : 28; }

double pair_gradients(const ParameterStore& store, const ModelSpec& spec, const TrainingPair& pair,
                      Gradients& grads) {
  const PatchContext ctx = prepare_patch(pair.sparse.cloud, pair.dense.positions, spec);
  Graph g;
  Var pred = model_graph(g, store, ctx, spec);
  Var loss = mae(pred, to_tensor(pair.dense.attributes));
  g.backward(loss);
  grads = g.parameter_grads();
  return double(loss.value()[0]);
}

double evaluate_loss(const ParameterStore& store, const ModelSpec& spec,
                     std::span<const TrainingPair> pairs) {
  if (pairs.empty()) fail(Errc::EmptyDataset, "no training pairs");
  std::vector<double> losses(pairs.size());
  std::exception_ptr error;
  const auto n = std::int64_t(pairs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      const PatchContext ctx = prepare_patch(pairs[i].sparse.cloud, pairs[i].dense.positions, spec);
      Graph g(false);
      Var pred = model_graph(g, store, ctx, spec);
      losses[i] = double(mae(pred, to_tensor(pairs[i].dense.attributes)).value()[0]);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return std::accumulate(losses.begin(), losses.end(), 0.0) / double(losses.size());
}

TrainResult train(std::span<const TrainingPair> pairs, const TrainOptions& options,
                  ParameterStore initial) {
  if (pairs.empty()) fail(Errc::EmptyDataset, "no training pairs");
  if (!options.spec.learnable()) fail(Errc::InvalidArgument, "model has no trainable networks");
  options.spec.net.validate();
  const std::size_t batch =
      options.batch ? options.batch : default_batch(options.spec.net.rate);

  TrainResult result;
  result.params = std::move(initial);
  // The geometry stage needs a learnable up-sampler; the built-in ones are not.
  result.geometry_stage_run = false;
  result.initial_loss = evaluate_loss(result.params, options.spec, pairs);

  Rng rng = Rng::derive(options.seed, 1);
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    double epoch_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t count = std::min(batch, order.size() - start);
      std::vector<TrainingPair> items;
      items.reserve(count);
      for (std::size_t j = 0; j < count; ++j) {
        const TrainingPair& p = pairs[order[start + j]];
        items.push_back(options.augment ? augment(p, rng, options.augmentation) : p);
      }
      std::vector<Gradients> grads(count);
      std::vector<double> losses(count);
      std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
      for (std::int64_t j = 0; j < std::int64_t(count); ++j) {
        try {
          losses[j] = pair_gradients(result.params, options.spec, items[j], grads[j]);
        } catch (...) {
#pragma omp critical
          if (!error) error = std::current_exception();
        }
      }
      if (error) std::rethrow_exception(error);

      Gradients total = std::move(grads[0]);
      for (std::size_t j = 1; j < count; ++j) {
        for (auto& [name, g] : total) {
          const Tensor& add = grads[j].at(name);
          for (std::size_t e = 0; e < g.numel(); ++e) g[e] += add[e];
        }
      }
      const float inv = 1.0f / float(count);
      for (auto& [name, g] : total) {
        for (float& v : g.values()) v *= inv;
      }
      adam_step(result.params, total, options.adam);
      for (double l : losses) epoch_sum += l;
    }
    const double mean = epoch_sum / double(pairs.size());
    result.epoch_loss.push_back(mean);
    if (options.on_epoch) options.on_epoch(EpochLog{epoch, mean});
  }
  result.final_loss = evaluate_loss(result.params, options.spec, pairs);
  return result;
}

TrainResult train(std::span<const TrainingPair> pairs, const TrainOptions& options) {
  Rng init_rng = Rng::derive(options.seed, 0);
  return train(pairs, options, init_model(options.spec, init_rng));
}

}  // namespace pcup::nn
