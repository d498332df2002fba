// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include "pcup/nn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "pcup/error.hpp"

namespace pcup::nn {
namespace {

std::size_t product(const std::vector<std::size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

}  // namespace

template <typename T>
TensorT<T>::TensorT(std::vector<std::size_t> shape, T fill)
    : shape_(std::move(shape)), data_(product(shape_), fill) {}

template <typename T>
TensorT<T>::TensorT(std::vector<std::size_t> shape, std::vector<T> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != product(shape_)) {
    fail(Errc::ShapeMismatch, "data length " + std::to_string(data_.size()) +
                                  " does not match shape " + shape_string(shape_));
  }
}

template <typename T>
bool TensorT<T>::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](T v) { return std::isfinite(v); });
}

template <typename T>
void TensorT<T>::fill(T v) {
  std::fill(data_.begin(), data_.end(), v);
}

std::string shape_string(const std::vector<std::size_t>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

template class TensorT<float>;
template class TensorT<double>;

}  // namespace pcup::nn
