#pragma once

#include <utility>
#include <vector>

#include "lunet/tensor.hpp"

// Hand-derived forward/backward kernels for every layer the networks need.
// All reductions accumulate in real64 regardless of the storage type. Every
// op is deterministic: identical inputs produce bitwise-identical outputs.

namespace lunet::nn {

enum class Mode { Train, Eval };

enum class ConvAlgo {
  Auto,    // picks Im2col
  Loop,    // direct nested loops, reference path
  Im2col,  // patch-matrix path; accumulates in the same k-order as Loop,
           // so the two agree bitwise
};

template <typename T>
struct ConvGrads {
  TensorT<T> x, w, b;
};

// Cross-correlation with zero padding. Kernel must be 3x3 (pad 1) or 1x1
// (pad 0); weight layout (Cout, Cin, kh, kw), bias (Cout).
template <typename T>
TensorT<T> conv2d_forward(const TensorT<T>& x, const TensorT<T>& w, const TensorT<T>& b,
                          int pad, ConvAlgo algo = ConvAlgo::Auto);

template <typename T>
ConvGrads<T> conv2d_backward(const TensorT<T>& grad_out, const TensorT<T>& x,
                             const TensorT<T>& w, int pad);

// Stride-2 2x2 transposed convolution: output is exactly (2H, 2W). Weight
// layout (Cin, Cout, 2, 2). With stride == kernel size every output pixel
// receives exactly one tap, so there is no overlap-add.
template <typename T>
TensorT<T> tconv2x2_forward(const TensorT<T>& x, const TensorT<T>& w, const TensorT<T>& b);

template <typename T>
ConvGrads<T> tconv2x2_backward(const TensorT<T>& grad_out, const TensorT<T>& x,
                               const TensorT<T>& w);

template <typename T>
struct BnCache {
  TensorT<T> xhat;
  std::vector<T> inv_std;  // per channel, 1/sqrt(var + eps)
};

template <typename T>
struct BnGrads {
  TensorT<T> x, gamma, beta;
};

// Per-channel statistics over (N, H, W). Train mode normalizes with batch
// statistics and, when running stats are supplied, folds them in with
// `momentum` (running = momentum * running + (1 - momentum) * batch).
// Fails with NumericalFault when N*H*W == 1 (variance undefined).
template <typename T>
TensorT<T> batchnorm_forward_train(const TensorT<T>& x, const TensorT<T>& gamma,
                                   const TensorT<T>& beta, TensorT<T>* running_mean,
                                   TensorT<T>* running_var, T momentum, T eps,
                                   BnCache<T>* cache);

template <typename T>
TensorT<T> batchnorm_forward_eval(const TensorT<T>& x, const TensorT<T>& gamma,
                                  const TensorT<T>& beta, const TensorT<T>& running_mean,
                                  const TensorT<T>& running_var, T eps);

template <typename T>
BnGrads<T> batchnorm_backward(const TensorT<T>& grad_out, const BnCache<T>& cache,
                              const TensorT<T>& gamma);

// max(0, x); subgradient at 0 is 0.
template <typename T>
TensorT<T> relu_forward(const TensorT<T>& x);
template <typename T>
TensorT<T> relu_backward(const TensorT<T>& grad_out, const TensorT<T>& x);

// 1/(1+exp(-x)) with a stable branch for negative x; backward takes the
// forward output.
template <typename T>
TensorT<T> sigmoid_forward(const TensorT<T>& x);
template <typename T>
TensorT<T> sigmoid_backward(const TensorT<T>& grad_out, const TensorT<T>& y);

template <typename T>
struct PoolOut {
  TensorT<T> out;
  std::vector<int64_t> indices;  // flat argmax offset into the pre-pool tensor
};

// 2x2/stride-2 max pooling; H and W must be even. Ties break toward the
// smallest flat index.
template <typename T>
PoolOut<T> maxpool2x2_forward(const TensorT<T>& x);

template <typename T>
TensorT<T> maxpool2x2_backward(const TensorT<T>& grad_out, const std::vector<int64_t>& indices,
                               const std::vector<int>& in_shape);

// Scatters x to the recorded positions, zeros elsewhere.
// maxpool(maxunpool(x, idx)) == x.
template <typename T>
TensorT<T> maxunpool2x2(const TensorT<T>& x, const std::vector<int64_t>& indices,
                        const std::vector<int>& out_shape);

template <typename T>
TensorT<T> maxunpool2x2_backward(const TensorT<T>& grad_out, const std::vector<int64_t>& indices,
                                 const std::vector<int>& in_shape);

// Channel concatenation; inputs must agree in N, H, W.
template <typename T>
TensorT<T> concat_channels(const TensorT<T>& a, const TensorT<T>& b);

template <typename T>
std::pair<TensorT<T>, TensorT<T>> split_channels(const TensorT<T>& grad, int ca, int cb);

// Elementwise sum of equal-shape tensors (residual/link merges).
template <typename T>
TensorT<T> add(const TensorT<T>& a, const TensorT<T>& b);

}  // namespace lunet::nn
