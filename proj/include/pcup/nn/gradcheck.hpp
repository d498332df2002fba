// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PCUP_NN_GRADCHECK_HPP
#define PCUP_NN_GRADCHECK_HPP

#include <cstddef>
#include <functional>
#include <string>

#include "pcup/nn/networks.hpp"
#include "pcup/nn/parameters.hpp"
#include "pcup/partition.hpp"

namespace pcup::nn {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t checked = 0;
  /// Coordinates whose +-eps evaluations cross a ReLU/max/abs switch; the
  /// central difference is not a derivative there, so they are left out.
  std::size_t skipped = 0;
};

/// Scalar loss built on a fresh graph from the given parameters.
using LossBuilder =
    std::function<VarT<double>(GraphT<double>&, const ParameterStoreT<double>&)>;

/// Central differences in double precision against the analytic gradient.
/// The error of a parameter tensor is |g_a - g_n| / max(|g_a|, |g_n|) over
/// its checked coordinates (Euclidean norms); the result is the worst one.
GradCheckResult gradient_check(const LossBuilder& loss, const ParameterStoreT<double>& params,
                               double eps = 1e-3);

/// MAE of the model's prediction on a toy pair (at most 16 dense points).
GradCheckResult gradient_check(const ModelSpec& spec, const ParameterStore& params,
                               const TrainingPair& toy, double eps = 1e-3);

}  // namespace pcup::nn

#endif  // PCUP_NN_GRADCHECK_HPP
