// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PCUP_NN_GRAPH_HPP
#define PCUP_NN_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pcup/nn/tensor.hpp"

namespace pcup::nn {

template <typename T>
class GraphT;

/// Handle to a node of a graph. Cheap to copy; valid while the graph lives.
template <typename T>
class VarT {
 public:
  VarT() = default;
  GraphT<T>& graph() const { return *graph_; }
  std::size_t id() const { return id_; }
  const TensorT<T>& value() const { return graph_->node_value(id_); }
  const TensorT<T>& grad() const { return graph_->node_grad(id_); }

 private:
  friend class GraphT<T>;
  VarT(GraphT<T>* g, std::size_t id) : graph_(g), id_(id) {}
  GraphT<T>* graph_ = nullptr;
  std::size_t id_ = 0;
};

using IndexList = std::shared_ptr<const std::vector<std::uint32_t>>;

/// Reverse-mode tape. Nodes are appended in evaluation order; backward()
/// walks them in reverse and accumulates into parents. One graph per
/// forward pass; graphs are not shared between threads.
template <typename T>
class GraphT {
 public:
  using Var = VarT<T>;
  using Tensor = TensorT<T>;

  /// With record == false no backward closures are kept (inference).
  explicit GraphT(bool record = true) : record_(record) {}
  GraphT(const GraphT&) = delete;
  GraphT& operator=(const GraphT&) = delete;

  Var constant(Tensor value);

  /// Leaf whose gradient is reported by parameter_grads(). Requesting the
  /// same name twice returns the same node.
  Var parameter(const std::string& name, const Tensor& value);

  /// Seeds d(out) with `seed` (same shape as out) and back-propagates.
  void backward(Var out, const Tensor& seed);
  /// Scalar output: seed of 1.
  void backward(Var out);

  std::map<std::string, Tensor> parameter_grads() const;

  std::size_t size() const { return nodes_.size(); }
  bool recording() const { return record_; }

  /// When enabled, every piecewise operation appends the branch it took
  /// (ReLU masks, max positions, loss signs). Two evaluations with equal
  /// traces lie on the same smooth piece.
  void set_tracing(bool on) { tracing_ = on; }
  bool tracing() const { return tracing_; }
  void trace(std::uint32_t v) { trace_.push_back(v); }
  const std::vector<std::uint32_t>& branch_trace() const { return trace_; }

  // Node construction for the operations below.
  using Backward = std::function<void(GraphT&, std::size_t self)>;
  Var emit(Tensor value, const std::vector<std::size_t>& parents, Backward backward);
  bool needs_grad(std::size_t id) const { return nodes_[id].needs_grad; }
  const Tensor& node_value(std::size_t id) const { return nodes_[id].value; }
  const Tensor& node_grad(std::size_t id) const { return nodes_[id].grad; }
  /// Gradient buffer of `id`, zero-allocated on first use.
  Tensor& grad_buffer(std::size_t id);

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool needs_grad = false;
    Backward backward;
  };

  bool record_;
  bool tracing_ = false;
  std::deque<Node> nodes_;
  std::map<std::string, std::size_t> params_;
  std::vector<std::uint32_t> trace_;
};

using Graph = GraphT<float>;
using Var = VarT<float>;

// ---- operations (all inputs must belong to the same graph) --------------

/// x[N,in] * w[in,out] + b[out].
template <typename T>
VarT<T> linear(VarT<T> x, VarT<T> w, VarT<T> b);
template <typename T>
VarT<T> relu(VarT<T> x);
template <typename T>
VarT<T> add(VarT<T> a, VarT<T> b);
template <typename T>
VarT<T> sub(VarT<T> a, VarT<T> b);
template <typename T>
VarT<T> mul(VarT<T> a, VarT<T> b);
/// Concatenate along the last dimension; all inputs have equal rows().
template <typename T>
VarT<T> concat_cols(std::span<const VarT<T>> parts);
/// out[i] = x[idx[i]] (rows). Backward scatter-adds.
template <typename T>
VarT<T> gather_rows(VarT<T> x, IndexList idx);
/// x[P*k, C] -> [P, C], max over each consecutive group of k rows
/// (first maximum receives the gradient).
template <typename T>
VarT<T> group_max(VarT<T> x, std::size_t k);
template <typename T>
VarT<T> group_mean(VarT<T> x, std::size_t k);
/// x[P*k, C] -> [P, C], out[p] = sum_j w[p*k+j] * x[p*k+j]; w is constant.
template <typename T>
VarT<T> group_weighted_sum(VarT<T> x, std::shared_ptr<const std::vector<T>> w, std::size_t k);
/// Mean absolute error against a constant target; output shape [1].
template <typename T>
VarT<T> mae(VarT<T> pred, const TensorT<T>& target);

template <typename T>
VarT<T> concat_cols(std::initializer_list<VarT<T>> parts) {
  const std::vector<VarT<T>> v(parts);
  return concat_cols(std::span<const VarT<T>>(v));
}

}  // namespace pcup::nn

#endif  // PCUP_NN_GRAPH_HPP
