// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PCUP_NN_TENSOR_HPP
#define PCUP_NN_TENSOR_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace pcup::nn {

/// Dense row-major array. Most operations view it as a matrix of
/// rows() x cols(), where cols() is the last dimension.
template <typename T>
class TensorT {
 public:
  using value_type = T;

  TensorT() = default;
  explicit TensorT(std::vector<std::size_t> shape, T fill = T(0));
  TensorT(std::vector<std::size_t> shape, std::vector<T> data);

  static TensorT zeros_like(const TensorT& other) { return TensorT(other.shape_); }

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t numel() const { return data_.size(); }
  std::size_t cols() const { return shape_.empty() ? 1 : shape_.back(); }
  std::size_t rows() const { return cols() == 0 ? 0 : numel() / cols(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  T& operator[](std::size_t i) { return data_[i]; }
  T operator[](std::size_t i) const { return data_[i]; }
  T& at(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
  T at(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

  bool same_shape(const TensorT& other) const { return shape_ == other.shape_; }
  bool all_finite() const;
  void fill(T v);

  template <typename U>
  TensorT<U> cast() const {
    if (shape_.empty() && data_.empty()) return {};
    return TensorT<U>(shape_, std::vector<U>(data_.begin(), data_.end()));
  }

  friend bool operator==(const TensorT&, const TensorT&) = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<T> data_;
};

using Tensor = TensorT<float>;

std::string shape_string(const std::vector<std::size_t>& shape);

extern template class TensorT<float>;
extern template class TensorT<double>;

}  // namespace pcup::nn

#endif  // PCUP_NN_TENSOR_HPP
