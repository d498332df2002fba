// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include "pcup/nn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Core>

#include "pcup/error.hpp"

namespace pcup::nn {
namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using RowVec = Eigen::Matrix<T, 1, Eigen::Dynamic>;

template <typename T>
Eigen::Map<const RowMat<T>> as_matrix(const TensorT<T>& t) {
  return {t.data(), Eigen::Index(t.rows()), Eigen::Index(t.cols())};
}
template <typename T>
Eigen::Map<RowMat<T>> as_matrix(TensorT<T>& t) {
  return {t.data(), Eigen::Index(t.rows()), Eigen::Index(t.cols())};
}

template <typename T>
GraphT<T>& same_graph(VarT<T> a, VarT<T> b) {
  if (&a.graph() != &b.graph()) fail(Errc::InvalidArgument, "variables from different graphs");
  return a.graph();
}

template <typename T>
void require_same_shape(const TensorT<T>& a, const TensorT<T>& b, const char* op) {
  if (!a.same_shape(b)) {
    fail(Errc::ShapeMismatch, std::string(op) + ": " + shape_string(a.shape()) + " vs " +
                                  shape_string(b.shape()));
  }
}

std::vector<std::size_t> matrix_shape(std::size_t rows, std::size_t cols) { return {rows, cols}; }

}  // namespace

// ---- GraphT --------------------------------------------------------------

template <typename T>
VarT<T> GraphT<T>::constant(Tensor value) {
  nodes_.push_back(Node{std::move(value), {}, false, {}});
  return Var(this, nodes_.size() - 1);
}

template <typename T>
VarT<T> GraphT<T>::parameter(const std::string& name, const Tensor& value) {
  if (auto it = params_.find(name); it != params_.end()) return Var(this, it->second);
  nodes_.push_back(Node{value, {}, record_, {}});
  params_[name] = nodes_.size() - 1;
  return Var(this, nodes_.size() - 1);
}

template <typename T>
VarT<T> GraphT<T>::emit(Tensor value, const std::vector<std::size_t>& parents,
                        Backward backward) {
#ifndef NDEBUG
  if (!value.all_finite()) fail(Errc::NonFinite, "non-finite activation in forward pass");
#endif
  bool grad = false;
  for (std::size_t p : parents) grad = grad || nodes_[p].needs_grad;
  grad = grad && record_;
  nodes_.push_back(Node{std::move(value), {}, grad, grad ? std::move(backward) : Backward{}});
  return Var(this, nodes_.size() - 1);
}

template <typename T>
TensorT<T>& GraphT<T>::grad_buffer(std::size_t id) {
  Node& n = nodes_[id];
  if (!n.grad.same_shape(n.value) || n.grad.numel() != n.value.numel()) {
    n.grad = Tensor::zeros_like(n.value);
  }
  return n.grad;
}

template <typename T>
void GraphT<T>::backward(Var out, const Tensor& seed) {
  if (!record_) fail(Errc::InvalidArgument, "backward on a non-recording graph");
  require_same_shape(node_value(out.id_), seed, "backward seed");
  grad_buffer(out.id_) = seed;
  for (std::size_t id = out.id_ + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (!n.needs_grad || !n.backward || n.grad.numel() == 0) continue;
    n.backward(*this, id);
  }
}

template <typename T>
void GraphT<T>::backward(Var out) {
  backward(out, Tensor(node_value(out.id_).shape(), T(1)));
}

template <typename T>
std::map<std::string, TensorT<T>> GraphT<T>::parameter_grads() const {
  std::map<std::string, Tensor> out;
  for (const auto& [name, id] : params_) {
    const Node& n = nodes_[id];
    out[name] = n.grad.same_shape(n.value) && n.grad.numel() == n.value.numel()
                    ? n.grad
                    : Tensor::zeros_like(n.value);
  }
  return out;
}

// ---- operations ----------------------------------------------------------

template <typename T>
VarT<T> linear(VarT<T> x, VarT<T> w, VarT<T> b) {
  GraphT<T>& g = same_graph(x, w);
  same_graph(x, b);
  const TensorT<T>& X = x.value();
  const TensorT<T>& W = w.value();
  const TensorT<T>& B = b.value();
  if (W.rank() != 2 || X.cols() != W.shape()[0] || B.numel() != W.shape()[1]) {
    fail(Errc::ShapeMismatch, "linear: input " + shape_string(X.shape()) + ", weight " +
                                  shape_string(W.shape()) + ", bias " + shape_string(B.shape()));
  }
  TensorT<T> Y(matrix_shape(X.rows(), W.shape()[1]));
  auto y = as_matrix(Y);
  y.noalias() = as_matrix(X) * as_matrix(W);
  y.rowwise() += Eigen::Map<const RowVec<T>>(B.data(), Eigen::Index(B.numel()));
  const std::size_t xi = x.id(), wi = w.id(), bi = b.id();
  return g.emit(std::move(Y), {xi, wi, bi}, [xi, wi, bi](GraphT<T>& gr, std::size_t self) {
    const TensorT<T>& dY = gr.node_grad(self);
    if (gr.needs_grad(xi)) {
      as_matrix(gr.grad_buffer(xi)).noalias() +=
          as_matrix(dY) * as_matrix(gr.node_value(wi)).transpose();
    }
    if (gr.needs_grad(wi)) {
      as_matrix(gr.grad_buffer(wi)).noalias() +=
          as_matrix(gr.node_value(xi)).transpose() * as_matrix(dY);
    }
    if (gr.needs_grad(bi)) {
      TensorT<T>& dB = gr.grad_buffer(bi);
      Eigen::Map<RowVec<T>>(dB.data(), Eigen::Index(dB.numel())) += as_matrix(dY).colwise().sum();
    }
  });
}

template <typename T>
VarT<T> relu(VarT<T> x) {
  GraphT<T>& g = x.graph();
  TensorT<T> Y = x.value();
  std::uint32_t bits = 0;
  for (std::size_t i = 0; i < Y.numel(); ++i) {
    const bool on = Y[i] > T(0);
    if (!on) Y[i] = T(0);
    if (g.tracing()) {
      bits = (bits << 1) | std::uint32_t(on);
      if (i % 32 == 31) g.trace(std::exchange(bits, 0u));
    }
  }
  if (g.tracing()) g.trace(bits);
  const std::size_t xi = x.id();
  return g.emit(std::move(Y), {xi}, [xi](GraphT<T>& gr, std::size_t self) {
    const TensorT<T>& dY = gr.node_grad(self);
    const TensorT<T>& X = gr.node_value(xi);
    TensorT<T>& dX = gr.grad_buffer(xi);
    for (std::size_t i = 0; i < X.numel(); ++i) {
      if (X[i] > T(0)) dX[i] += dY[i];
    }
  });
}

template <typename T>
VarT<T> add(VarT<T> a, VarT<T> b) {
  GraphT<T>& g = same_graph(a, b);
  require_same_shape(a.value(), b.value(), "add");
  TensorT<T> Y = a.value();
  const TensorT<T>& B = b.value();
  for (std::size_t i = 0; i < Y.numel(); ++i) Y[i] += B[i];
  const std::size_t ai = a.id(), bi = b.id();
  return g.emit(std::move(Y), {ai, bi}, [ai, bi](GraphT<T>& gr, std::size_t self) {
    const TensorT<T>& dY = gr.node_grad(self);
    for (std::size_t p : {ai, bi}) {
      if (!gr.needs_grad(p)) continue;
      TensorT<T>& d = gr.grad_buffer(p);
      for (std::size_t i = 0; i < d.numel(); ++i) d[i] += dY[i];
    }
  });
}

template <typename T>
VarT<T> sub(VarT<T> a, VarT<T> b) {
  GraphT<T>& g = same_graph(a, b);
  require_same_shape(a.value(), b.value(), "sub");
  TensorT<T> Y = a.value();
  const TensorT<T>& B = b.value();
  for (std::size_t i = 0; i < Y.numel(); ++i) Y[i] -= B[i];
  const std::size_t ai = a.id(), bi = b.id();
  return g.emit(std::move(Y), {ai, bi}, [ai, bi](GraphT<T>& gr, std::size_t self) {
    const TensorT<T>& dY = gr.node_grad(self);
    if (gr.needs_grad(ai)) {
      TensorT<T>& d = gr.grad_buffer(ai);
      for (std::size_t i = 0; i < d.numel(); ++i) d[i] += dY[i];
    }
    if (gr.needs_grad(bi)) {
      TensorT<T>& d = gr.grad_buffer(bi);
      for (std::size_t i = 0; i < d.numel(); ++i) d[i] -= dY[i];
    }
  });
}

template <typename T>
VarT<T> mul(VarT<T> a, VarT<T> b) {
  GraphT<T>& g = same_graph(a, b);
  require_same_shape(a.value(), b.value(), "mul");
  TensorT<T> Y = a.value();
  const TensorT<T>& B = b.value();
  for (std::size_t i = 0; i < Y.numel(); ++i) Y[i] *= B[i];
  const std::size_t ai = a.id(), bi = b.id();
  return g.emit(std::move(Y), {ai, bi}, [ai, bi](GraphT<T>& gr, std::size_t self) {
    const TensorT<T>& dY = gr.node_grad(self);
    if (gr.needs_grad(ai)) {
      const TensorT<T>& Bv = gr.node_value(bi);
      TensorT<T>& d = gr.grad_buffer(ai);
      for (std::size_t i = 0; i < d.numel(); ++i) d[i] += dY[i] * Bv[i];
    }
    if (gr.needs_grad(bi)) {
      const TensorT<T>& Av = gr.node_value(ai);
      TensorT<T>& d = gr.grad_buffer(bi);
      for (std::size_t i = 0; i < d.numel(); ++i) d[i] += dY[i] * Av[i];
    }
  });
}

template <typename T>
VarT<T> concat_cols(std::span<const VarT<T>> parts) {
  if (parts.empty()) fail(Errc::ShapeMismatch, "concat of nothing");
  GraphT<T>& g = parts[0].graph();
  const std::size_t rows = parts[0].value().rows();
  std::size_t total = 0;
  std::vector<std::size_t> ids, widths;
  for (const VarT<T>& p : parts) {
    same_graph(parts[0], p);
    if (p.value().rows() != rows) {
      fail(Errc::ShapeMismatch, "concat: row counts differ (" + std::to_string(rows) + " vs " +
                                    std::to_string(p.value().rows()) + ")");
    }
    ids.push_back(p.id());
    widths.push_back(p.value().cols());
    total += p.value().cols();
  }
  TensorT<T> Y(matrix_shape(rows, total));
  std::size_t offset = 0;
  for (const VarT<T>& p : parts) {
    const TensorT<T>& X = p.value();
    const std::size_t c = X.cols();
    for (std::size_t r = 0; r < rows; ++r) {
      std::copy_n(X.data() + r * c, c, Y.data() + r * total + offset);
    }
    offset += c;
  }
  return g.emit(std::move(Y), ids, [ids, widths, total](GraphT<T>& gr, std::size_t self) {
    const TensorT<T>& dY = gr.node_grad(self);
    const std::size_t rows = dY.rows();
    std::size_t offset = 0;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const std::size_t c = widths[k];
      if (gr.needs_grad(ids[k])) {
        TensorT<T>& d = gr.grad_buffer(ids[k]);
        for (std::size_t r = 0; r < rows; ++r) {
          const T* src = dY.data() + r * total + offset;
          T* dst = d.data() + r * c;
          for (std::size_t j = 0; j < c; ++j) dst[j] += src[j];
        }
      }
      offset += c;
    }
  });
}

template <typename T>
VarT<T> gather_rows(VarT<T> x, IndexList idx) {
  GraphT<T>& g = x.graph();
  const TensorT<T>& X = x.value();
  const std::size_t c = X.cols();
  const std::size_t n = X.rows();
  TensorT<T> Y(matrix_shape(idx->size(), c));
  for (std::size_t i = 0; i < idx->size(); ++i) {
    const std::uint32_t r = (*idx)[i];
    if (r >= n) fail(Errc::ShapeMismatch, "gather index out of range");
    std::copy_n(X.data() + std::size_t(r) * c, c, Y.data() + i * c);
  }
  const std::size_t xi = x.id();
  return g.emit(std::move(Y), {xi}, [xi, idx, c](GraphT<T>& gr, std::size_t self) {
    const TensorT<T>& dY = gr.node_grad(self);
    TensorT<T>& dX = gr.grad_buffer(xi);
    for (std::size_t i = 0; i < idx->size(); ++i) {
      T* dst = dX.data() + std::size_t((*idx)[i]) * c;
      const T* src = dY.data() + i * c;
      for (std::size_t j = 0; j < c; ++j) dst[j] += src[j];
    }
  });
}

template <typename T>
VarT<T> group_max(VarT<T> x, std::size_t k) {
  GraphT<T>& g = x.graph();
  const TensorT<T>& X = x.value();
  if (k == 0 || X.rows() % k != 0) fail(Errc::ShapeMismatch, "group_max: rows not divisible by k");
  const std::size_t c = X.cols();
  const std::size_t groups = X.rows() / k;
  TensorT<T> Y(matrix_shape(groups, c));
  auto arg = std::make_shared<std::vector<std::uint32_t>>(groups * c);
  for (std::size_t p = 0; p < groups; ++p) {
    for (std::size_t j = 0; j < c; ++j) {
      std::size_t best = p * k;
      T v = X.at(best, j);
      for (std::size_t r = p * k + 1; r < (p + 1) * k; ++r) {
        if (X.at(r, j) > v) {
          v = X.at(r, j);
          best = r;
        }
      }
      Y.at(p, j) = v;
      (*arg)[p * c + j] = std::uint32_t(best);
    }
  }
  if (g.tracing()) {
    for (std::uint32_t a : *arg) g.trace(a);
  }
  const std::size_t xi = x.id();
  return g.emit(std::move(Y), {xi}, [xi, arg, c](GraphT<T>& gr, std::size_t self) {
    const TensorT<T>& dY = gr.node_grad(self);
    TensorT<T>& dX = gr.grad_buffer(xi);
    for (std::size_t i = 0; i < arg->size(); ++i) {
      dX[std::size_t((*arg)[i]) * c + i % c] += dY[i];
    }
  });
}

template <typename T>
VarT<T> group_mean(VarT<T> x, std::size_t k) {
  GraphT<T>& g = x.graph();
  const TensorT<T>& X = x.value();
  if (k == 0 || X.rows() % k != 0) fail(Errc::ShapeMismatch, "group_mean: rows not divisible by k");
  const std::size_t c = X.cols();
  const std::size_t groups = X.rows() / k;
  const T inv = T(1) / T(k);
  TensorT<T> Y(matrix_shape(groups, c));
  for (std::size_t p = 0; p < groups; ++p) {
    for (std::size_t r = p * k; r < (p + 1) * k; ++r) {
      for (std::size_t j = 0; j < c; ++j) Y.at(p, j) += X.at(r, j);
    }
    for (std::size_t j = 0; j < c; ++j) Y.at(p, j) *= inv;
  }
  const std::size_t xi = x.id();
  return g.emit(std::move(Y), {xi}, [xi, k, c, inv](GraphT<T>& gr, std::size_t self) {
    const TensorT<T>& dY = gr.node_grad(self);
    TensorT<T>& dX = gr.grad_buffer(xi);
    for (std::size_t r = 0; r < dX.rows(); ++r) {
      for (std::size_t j = 0; j < c; ++j) dX.at(r, j) += dY.at(r / k, j) * inv;
    }
  });
}

template <typename T>
VarT<T> group_weighted_sum(VarT<T> x, std::shared_ptr<const std::vector<T>> w, std::size_t k) {
  GraphT<T>& g = x.graph();
  const TensorT<T>& X = x.value();
  if (k == 0 || X.rows() % k != 0 || w->size() != X.rows()) {
    fail(Errc::ShapeMismatch, "group_weighted_sum: inconsistent rows/weights");
  }
  const std::size_t c = X.cols();
  const std::size_t groups = X.rows() / k;
  TensorT<T> Y(matrix_shape(groups, c));
  for (std::size_t r = 0; r < X.rows(); ++r) {
    const T wr = (*w)[r];
    for (std::size_t j = 0; j < c; ++j) Y.at(r / k, j) += wr * X.at(r, j);
  }
  const std::size_t xi = x.id();
  return g.emit(std::move(Y), {xi}, [xi, w, k, c](GraphT<T>& gr, std::size_t self) {
    const TensorT<T>& dY = gr.node_grad(self);
    TensorT<T>& dX = gr.grad_buffer(xi);
    for (std::size_t r = 0; r < dX.rows(); ++r) {
      const T wr = (*w)[r];
      for (std::size_t j = 0; j < c; ++j) dX.at(r, j) += wr * dY.at(r / k, j);
    }
  });
}

template <typename T>
VarT<T> mae(VarT<T> pred, const TensorT<T>& target) {
  GraphT<T>& g = pred.graph();
  require_same_shape(pred.value(), target, "mae");
  const TensorT<T>& P = pred.value();
  double acc = 0.0;
  for (std::size_t i = 0; i < P.numel(); ++i) {
    const double diff = double(P[i]) - double(target[i]);
    acc += std::abs(diff);
    if (g.tracing()) g.trace(diff > 0.0 ? 2u : (diff < 0.0 ? 0u : 1u));
  }
  const double n = double(P.numel());
  TensorT<T> Y(std::vector<std::size_t>{1}, T(acc / n));
  const std::size_t pi = pred.id();
  auto tgt = std::make_shared<const TensorT<T>>(target);
  return g.emit(std::move(Y), {pi}, [pi, tgt, n](GraphT<T>& gr, std::size_t self) {
    const T s = gr.node_grad(self)[0] / T(n);
    const TensorT<T>& Pv = gr.node_value(pi);
    TensorT<T>& d = gr.grad_buffer(pi);
    for (std::size_t i = 0; i < d.numel(); ++i) {
      const T diff = Pv[i] - (*tgt)[i];
      d[i] += diff > T(0) ? s : (diff < T(0) ? -s : T(0));
    }
  });
}

#define PCUP_INSTANTIATE_GRAPH(T)                                                        \
  template class GraphT<T>;                                                              \
  template VarT<T> linear<T>(VarT<T>, VarT<T>, VarT<T>);                                 \
  template VarT<T> relu<T>(VarT<T>);                                                     \
  template VarT<T> add<T>(VarT<T>, VarT<T>);                                             \
  template VarT<T> sub<T>(VarT<T>, VarT<T>);                                             \
  template VarT<T> mul<T>(VarT<T>, VarT<T>);                                             \
  template VarT<T> concat_cols<T>(std::span<const VarT<T>>);                             \
  template VarT<T> gather_rows<T>(VarT<T>, IndexList);                                   \
  template VarT<T> group_max<T>(VarT<T>, std::size_t);                                   \
  template VarT<T> group_mean<T>(VarT<T>, std::size_t);                                  \
  template VarT<T> group_weighted_sum<T>(VarT<T>, std::shared_ptr<const std::vector<T>>, \
                                         std::size_t);                                   \
  template VarT<T> mae<T>(VarT<T>, const TensorT<T>&);

PCUP_INSTANTIATE_GRAPH(float)
PCUP_INSTANTIATE_GRAPH(double)

#undef PCUP_INSTANTIATE_GRAPH

}  // namespace pcup::nn
