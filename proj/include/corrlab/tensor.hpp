#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

#include "corrlab/rational.hpp"

namespace corrlab {

/// Dense probability tensor, row-major with axis 0 varying slowest.
template <class T>
struct Tensor {
  std::vector<int> dims;
  std::vector<T> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> d) : dims(std::move(d)) {
    data.assign(flat_size(dims), T(0));
  }

  static std::size_t flat_size(const std::vector<int>& dims) {
    std::size_t n = 1;
    for (int d : dims) n *= static_cast<std::size_t>(d);
    return n;
  }

  std::size_t size() const { return data.size(); }
  int rank() const { return static_cast<int>(dims.size()); }

  std::size_t flat_index(const std::vector<int>& idx) const {
    std::size_t f = 0;
    for (int a = 0; a < rank(); ++a) f = f * dims[a] + idx[a];
    return f;
  }

  std::vector<int> multi_index(std::size_t flat) const {
    std::vector<int> idx(dims.size());
    for (int a = rank() - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(flat % dims[a]);
      flat /= dims[a];
    }
    return idx;
  }

  T& at(const std::vector<int>& idx) { return data[flat_index(idx)]; }
  const T& at(const std::vector<int>& idx) const { return data[flat_index(idx)]; }

  T sum() const {
    T s(0);
    for (const T& x : data) s += x;
    return s;
  }

  /// Sums out every axis not listed in `keep` (strictly increasing axis ids).
  Tensor<T> marginalize(const std::vector<int>& keep) const {
    std::vector<int> kept_dims;
    kept_dims.reserve(keep.size());
    for (int a : keep) kept_dims.push_back(dims[a]);
    Tensor<T> out(kept_dims);
    std::vector<int> idx(dims.size());
    for (std::size_t f = 0; f < data.size(); ++f) {
      std::size_t rem = f;
      for (int a = rank() - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(rem % dims[a]);
        rem /= dims[a];
      }
      std::size_t g = 0;
      for (int a : keep) g = g * dims[a] + idx[a];
      out.data[g] += data[f];
    }
    return out;
  }

  static Tensor<T> outer(const Tensor<T>& a, const Tensor<T>& b) {
    std::vector<int> dims = a.dims;
    dims.insert(dims.end(), b.dims.begin(), b.dims.end());
    Tensor<T> out(dims);
    for (std::size_t i = 0; i < a.data.size(); ++i)
      for (std::size_t j = 0; j < b.data.size(); ++j)
        out.data[i * b.data.size() + j] = a.data[i] * b.data[j];
    return out;
  }

  /// Largest absolute entrywise difference; shapes must match.
  static T max_abs_diff(const Tensor<T>& a, const Tensor<T>& b) {
    T worst(0);
    for (std::size_t i = 0; i < a.data.size(); ++i) {
      T d = a.data[i] - b.data[i];
      d = abs_value(d);
      if (d > worst) worst = d;
    }
    return worst;
  }
};

/// Mixed-radix counter over `dims` (first digit most significant).
/// Returns false once the counter wraps past the last tuple.
inline bool next_tuple(std::vector<int>& tuple, const std::vector<int>& dims) {
  for (int a = static_cast<int>(dims.size()) - 1; a >= 0; --a) {
    if (++tuple[a] < dims[a]) return true;
    tuple[a] = 0;
  }
  return false;
}

}  // namespace corrlab
