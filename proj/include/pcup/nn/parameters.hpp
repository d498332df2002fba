// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PCUP_NN_PARAMETERS_HPP
#define PCUP_NN_PARAMETERS_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>

#include "pcup/error.hpp"
#include "pcup/nn/graph.hpp"
#include "pcup/nn/tensor.hpp"

namespace pcup::nn {

/// Named weights with their Adam moments. Iteration order is by name.
template <typename T>
class ParameterStoreT {
 public:
  struct Entry {
    TensorT<T> value;
    TensorT<T> m;
    TensorT<T> v;
    std::uint64_t step = 0;
  };

  void add(const std::string& name, TensorT<T> value) {
    if (entries_.count(name)) fail(Errc::InvalidArgument, "duplicate parameter '" + name + "'");
    Entry e;
    e.m = TensorT<T>::zeros_like(value);
    e.v = TensorT<T>::zeros_like(value);
    e.value = std::move(value);
    entries_.emplace(name, std::move(e));
  }

  bool contains(const std::string& name) const { return entries_.count(name) != 0; }

  const TensorT<T>& get(const std::string& name) const { return entry(name).value; }
  TensorT<T>& get_mutable(const std::string& name) { return entry(name).value; }

  Entry& entry(const std::string& name) {
    auto it = entries_.find(name);
    if (it == entries_.end()) fail(Errc::InvalidArgument, "unknown parameter '" + name + "'");
    return it->second;
  }
  const Entry& entry(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) fail(Errc::InvalidArgument, "unknown parameter '" + name + "'");
    return it->second;
  }

  const std::map<std::string, Entry>& entries() const { return entries_; }
  std::map<std::string, Entry>& entries() { return entries_; }

  std::size_t size() const { return entries_.size(); }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& [name, e] : entries_) n += e.value.numel();
    return n;
  }

  /// Graph leaf for `name`; repeated calls on one graph share the node.
  VarT<T> bind(GraphT<T>& g, const std::string& name) const { return g.parameter(name, get(name)); }

  /// Values only; optimizer state is reset.
  template <typename U>
  ParameterStoreT<U> cast() const {
    ParameterStoreT<U> out;
    for (const auto& [name, e] : entries_) out.add(name, e.value.template cast<U>());
    return out;
  }

  bool same_values(const ParameterStoreT& other) const {
    if (entries_.size() != other.entries_.size()) return false;
    auto a = entries_.begin();
    auto b = other.entries_.begin();
    for (; a != entries_.end(); ++a, ++b) {
      if (a->first != b->first || !(a->second.value == b->second.value)) return false;
    }
    return true;
  }

 private:
  std::map<std::string, Entry> entries_;
};

using ParameterStore = ParameterStoreT<float>;
using Gradients = std::map<std::string, Tensor>;

}  // namespace pcup::nn

#endif  // PCUP_NN_PARAMETERS_HPP
