// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PCUP_NN_TRAIN_HPP
#define PCUP_NN_TRAIN_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "pcup/cloud.hpp"
#include "pcup/nn/networks.hpp"
#include "pcup/nn/optim.hpp"
#include "pcup/partition.hpp"
#include "pcup/rng.hpp"

namespace pcup::nn {

struct LossReport {
  double attribute_mae = 0.0;
  double chamfer = 0.0;
};

/// Mean of |pred - target| over all entries.
double mae_loss(std::span<const Vec3> pred, std::span<const Vec3> target);

/// Symmetric mean squared nearest-neighbor distance; same as metrics::chamfer.
double chamfer_loss(std::span<const Vec3> pred, std::span<const Vec3> target);

struct AugmentConfig {
  double scale_min = 0.8;
  double scale_max = 1.25;
  double jitter = 0.005;  // fraction of the patch bounding-box diagonal
};

/// Scales positions about the origin by `scale` and adds Gaussian noise of
/// standard deviation `sigma` (absolute units). Sparse points receive the
/// same displacement as their dense counterparts.
TrainingPair transform_pair(const TrainingPair& pair, double scale, double sigma, Rng& rng);

TrainingPair augment(const TrainingPair& pair, Rng& rng, const AugmentConfig& cfg = {});

struct EpochLog {
  std::size_t epoch = 0;
  double mean_loss = 0.0;
};

struct TrainOptions {
  ModelSpec spec;
  std::size_t epochs = 400;
  std::size_t batch = 0;  // 0: 40 for R <= 12, else 28
  AdamConfig adam;
  RngSeed seed;
  bool augment = true;
  AugmentConfig augmentation;
  std::function<void(const EpochLog&)> on_epoch;
};

struct TrainResult {
  ParameterStore params;
  std::vector<double> epoch_loss;
  double initial_loss = 0.0;  // evaluate_loss before the first step
  double final_loss = 0.0;    // evaluate_loss after the last step
  bool geometry_stage_run = false;
};

std::size_t default_batch(int rate);

/// Loss and parameter gradients of one pair.
double pair_gradients(const ParameterStore& store, const ModelSpec& spec, const TrainingPair& pair,
                      Gradients& grads);

/// Mean MAE over `pairs` (no augmentation, no clamp).
double evaluate_loss(const ParameterStore& store, const ModelSpec& spec,
                     std::span<const TrainingPair> pairs);

/// Attribute stage with the given starting parameters.
TrainResult train(std::span<const TrainingPair> pairs, const TrainOptions& options,
                  ParameterStore initial);

/// Initializes parameters from options.seed, then trains.
TrainResult train(std::span<const TrainingPair> pairs, const TrainOptions& options);

}  // namespace pcup::nn

#endif  // PCUP_NN_TRAIN_HPP
