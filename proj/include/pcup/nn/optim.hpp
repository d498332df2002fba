// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PCUP_NN_OPTIM_HPP
#define PCUP_NN_OPTIM_HPP

#include "pcup/nn/parameters.hpp"

namespace pcup::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// One Adam update with bias correction. Parameters absent from `grads`
/// are treated as having zero gradient.
void adam_step(ParameterStore& store, const Gradients& grads, const AdamConfig& cfg = {});

}  // namespace pcup::nn

#endif  // PCUP_NN_OPTIM_HPP
