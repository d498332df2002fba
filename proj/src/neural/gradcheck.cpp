// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include "pcup/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pcup/error.hpp"

namespace pcup::nn {
namespace {

struct Evaluation {
  double loss;
  std::vector<std::uint32_t> trace;
};

Evaluation evaluate(const LossBuilder& build, const ParameterStoreT<double>& params) {
  GraphT<double> g(false);
  g.set_tracing(true);
  VarT<double> out = build(g, params);
  if (out.value().numel() != 1) fail(Errc::ShapeMismatch, "gradient check needs a scalar loss");
  return {out.value()[0], g.branch_trace()};
}

}  // namespace

GradCheckResult gradient_check(const LossBuilder& build, const ParameterStoreT<double>& params,
                               double eps) {
  if (!(eps > 0.0)) fail(Errc::InvalidArgument, "finite-difference step must be positive");
  GraphT<double> g;
  g.set_tracing(true);
  VarT<double> out = build(g, params);
  g.backward(out);
  const auto analytic = g.parameter_grads();
  const std::vector<std::uint32_t> base = g.branch_trace();

  GradCheckResult result;
  ParameterStoreT<double> work = params.cast<double>();
  for (const auto& [name, entry] : params.entries()) {
    const auto it = analytic.find(name);
    const TensorT<double>* ga = it == analytic.end() ? nullptr : &it->second;
    TensorT<double>& value = work.get_mutable(name);
    double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
    for (std::size_t i = 0; i < value.numel(); ++i) {
      const double orig = value[i];
      value[i] = orig + eps;
      const Evaluation plus = evaluate(build, work);
      value[i] = orig - eps;
      const Evaluation minus = evaluate(build, work);
      value[i] = orig;
      if (plus.trace != base || minus.trace != base) {
        ++result.skipped;
        continue;
      }
      ++result.checked;
      const double numeric = (plus.loss - minus.loss) / (2.0 * eps);
      const double a = ga ? (*ga)[i] : 0.0;
      diff2 += (a - numeric) * (a - numeric);
      a2 += a * a;
      n2 += numeric * numeric;
    }
    const double denom = std::max({std::sqrt(a2), std::sqrt(n2),
                                   std::numeric_limits<double>::min()});
    const double rel = std::sqrt(diff2) / denom;
    if (result.worst_parameter.empty() || rel > result.max_relative_error) {
      result.max_relative_error = rel;
      result.worst_parameter = name;
    }
  }
  return result;
}

GradCheckResult gradient_check(const ModelSpec& spec, const ParameterStore& params,
                               const TrainingPair& toy, double eps) {
  if (toy.dense.size() > 16) {
    fail(Errc::InvalidArgument, "gradient check toy input must have at most 16 points");
  }
  const PatchContextT<double> ctx =
      prepare_patch(toy.sparse.cloud, toy.dense.positions, spec).cast<double>();
  TensorT<double> target({toy.dense.size(), 3});
  for (std::size_t i = 0; i < toy.dense.size(); ++i) {
    for (int c = 0; c < 3; ++c) target.at(i, c) = toy.dense.attributes[i][c];
  }
  const LossBuilder build = [&](GraphT<double>& g, const ParameterStoreT<double>& p) {
    return mae(model_graph(g, p, ctx, spec), target);
  };
  return gradient_check(build, params.cast<double>(), eps);
}

}  // namespace pcup::nn
