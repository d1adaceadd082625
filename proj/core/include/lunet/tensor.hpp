#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "lunet/error.hpp"

namespace lunet {

// Dense row-major N-d array. Canonical layout for network activations is
// (N, C, H, W). Storage is real32 in the engine; the gradient-check harness
// instantiates the real64 variant.
template <typename T>
struct TensorT {
  std::vector<int> shape;
  std::vector<T> data;

  TensorT() = default;

  explicit TensorT(std::vector<int> s, T fill = T(0)) : shape(std::move(s)) {
    data.assign(size_t(numel(shape)), fill);
  }

  static int64_t numel(const std::vector<int>& s) {
    int64_t n = 1;
    for (int d : s) {
      require(d >= 0, ErrorKind::ShapeMismatch, "negative dimension");
      n *= d;
    }
    return n;
  }

  static TensorT zeros_like(const TensorT& o) { return TensorT(o.shape); }

  int64_t size() const { return int64_t(data.size()); }
  int ndim() const { return int(shape.size()); }
  int dim(int i) const { return shape[size_t(i)]; }

  bool same_shape(const TensorT& o) const { return shape == o.shape; }

  // 4-D accessors (N, C, H, W).
  int64_t offset(int n, int c, int h, int w) const {
    return ((int64_t(n) * shape[1] + c) * shape[2] + h) * shape[3] + w;
  }
  T& at(int n, int c, int h, int w) { return data[size_t(offset(n, c, h, w))]; }
  T at(int n, int c, int h, int w) const { return data[size_t(offset(n, c, h, w))]; }

  void fill(T v) { std::fill(data.begin(), data.end(), v); }

  void assert_finite(const char* what) const {
    for (T v : data) {
      if (!std::isfinite(double(v))) fail(ErrorKind::NumericalFault, std::string("non-finite value in ") + what);
    }
  }
};

using Tensor = TensorT<float>;

inline std::string shape_str(const std::vector<int>& s) {
  std::string r = "(";
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) r += ",";
    r += std::to_string(s[i]);
  }
  return r + ")";
}

template <typename T>
void check_same_shape(const TensorT<T>& a, const TensorT<T>& b, const char* where) {
  require(a.same_shape(b), ErrorKind::ShapeMismatch,
          std::string(where) + ": " + shape_str(a.shape) + " vs " + shape_str(b.shape));
}

}  // namespace lunet
