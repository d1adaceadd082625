#pragma once

#include <string>
#include <vector>

#include "lunet/ops.hpp"
#include "lunet/rng.hpp"

// Stateful layer objects used to assemble the fixed-schedule networks.
// Each layer owns its parameters, gradient slots and the forward cache its
// backward pass consumes. Backward without a cached forward raises
// StaleCache; backward consumes the cache.

namespace lunet::nn {

struct ParamSlot {
  std::string name;
  Tensor* value;
  Tensor* grad;
};

struct BufferSlot {
  std::string name;
  Tensor* value;
};

struct Conv2d {
  Tensor w, b, gw, gb;
  int pad = 1;
  Tensor x_cache;
  bool cached = false;

  // He-uniform: bound = sqrt(6 / fan_in), fan_in = cin * k * k; bias zero.
  void init(int cin, int cout, int ksize, Rng& rng);
  Tensor forward(const Tensor& x, Mode mode);
  Tensor backward(const Tensor& grad_out);
  void collect(const std::string& prefix, std::vector<ParamSlot>& out);
};

struct TConv2d {
  Tensor w, b, gw, gb;  // weight (Cin, Cout, 2, 2)
  Tensor x_cache;
  bool cached = false;

  void init(int cin, int cout, Rng& rng);
  Tensor forward(const Tensor& x, Mode mode);
  Tensor backward(const Tensor& grad_out);
  void collect(const std::string& prefix, std::vector<ParamSlot>& out);
};

struct BatchNorm {
  Tensor gamma, beta, ggamma, gbeta;
  Tensor running_mean, running_var;
  float momentum = 0.9f, eps = 1e-5f;
  BnCache<float> cache;
  bool cached = false;

  void init(int channels);
  Tensor forward(const Tensor& x, Mode mode);
  Tensor backward(const Tensor& grad_out);
  void collect(const std::string& prefix, std::vector<ParamSlot>& out);
  void collect_buffers(const std::string& prefix, std::vector<BufferSlot>& out);
};

struct ReLULayer {
  Tensor x_cache;
  bool cached = false;
  Tensor forward(const Tensor& x, Mode mode);
  Tensor backward(const Tensor& grad_out);
};

struct SigmoidLayer {
  Tensor y_cache;
  bool cached = false;
  Tensor forward(const Tensor& x, Mode mode);
  Tensor backward(const Tensor& grad_out);
};

struct MaxPool {
  std::vector<int64_t> indices;
  std::vector<int> in_shape;
  bool cached = false;
  Tensor forward(const Tensor& x, Mode mode);
  Tensor backward(const Tensor& grad_out);
};

// conv3x3 -> BN -> ReLU, twice.
struct ConvBlock {
  Conv2d c1, c2;
  BatchNorm b1, b2;
  ReLULayer r1, r2;

  void init(int cin, int cout, Rng& rng);
  Tensor forward(const Tensor& x, Mode mode);
  Tensor backward(const Tensor& grad_out);
  void collect(const std::string& prefix, std::vector<ParamSlot>& out);
  void collect_buffers(const std::string& prefix, std::vector<BufferSlot>& out);
};

}  // namespace lunet::nn
