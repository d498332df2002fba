// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include "pcup/nn/optim.hpp"

#include <cmath>

#include "pcup/error.hpp"

namespace pcup::nn {

void adam_step(ParameterStore& store, const Gradients& grads, const AdamConfig& cfg) {
  for (const auto& [name, g] : grads) {
    const Tensor& value = store.get(name);
    if (!g.same_shape(value)) {
      fail(Errc::ShapeMismatch, "gradient for '" + name + "' has shape " +
                                    shape_string(g.shape()) + ", parameter " +
                                    shape_string(value.shape()));
    }
  }
  for (auto& [name, e] : store.entries()) {
    const auto it = grads.find(name);
    const Tensor* g = it == grads.end() ? nullptr : &it->second;
    e.step += 1;
    const double c1 = 1.0 - std::pow(cfg.beta1, double(e.step));
    const double c2 = 1.0 - std::pow(cfg.beta2, double(e.step));
    for (std::size_t i = 0; i < e.value.numel(); ++i) {
      const double gi = g ? double((*g)[i]) : 0.0;
      const double m = cfg.beta1 * double(e.m[i]) + (1.0 - cfg.beta1) * gi;
      const double v = cfg.beta2 * double(e.v[i]) + (1.0 - cfg.beta2) * gi * gi;
      e.m[i] = float(m);
      e.v[i] = float(v);
      const double update = cfg.lr * (m / c1) / (std::sqrt(v / c2) + cfg.eps);
      e.value[i] = float(double(e.value[i]) - update);
    }
  }
}

}  // namespace pcup::nn
