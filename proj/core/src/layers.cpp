#include "lunet/layers.hpp"

#include <cmath>

namespace lunet::nn {

namespace {

void he_uniform(Tensor& w, int fan_in, Rng& rng) {
  const float bound = std::sqrt(6.0f / float(fan_in));
  for (float& v : w.data) v = rng.uniform(-bound, bound);
}

}  // namespace

void Conv2d::init(int cin, int cout, int ksize, Rng& rng) {
  pad = ksize / 2;
  w = Tensor({cout, cin, ksize, ksize});
  b = Tensor({cout});
  gw = Tensor::zeros_like(w);
  gb = Tensor::zeros_like(b);
  he_uniform(w, cin * ksize * ksize, rng);
}

Tensor Conv2d::forward(const Tensor& x, Mode mode) {
  if (mode == Mode::Train) {
    x_cache = x;
    cached = true;
  }
  return conv2d_forward(x, w, b, pad);
}

Tensor Conv2d::backward(const Tensor& grad_out) {
  require(cached, ErrorKind::StaleCache, "conv backward without train-mode forward");
  cached = false;
  auto g = conv2d_backward(grad_out, x_cache, w, pad);
  gw = std::move(g.w);
  gb = std::move(g.b);
  return std::move(g.x);
}

void Conv2d::collect(const std::string& prefix, std::vector<ParamSlot>& out) {
  out.push_back({prefix + ".w", &w, &gw});
  out.push_back({prefix + ".b", &b, &gb});
}

void TConv2d::init(int cin, int cout, Rng& rng) {
  w = Tensor({cin, cout, 2, 2});
  b = Tensor({cout});
  gw = Tensor::zeros_like(w);
  gb = Tensor::zeros_like(b);
  he_uniform(w, cin * 4, rng);
}

Tensor TConv2d::forward(const Tensor& x, Mode mode) {
  if (mode == Mode::Train) {
    x_cache = x;
    cached = true;
  }
  return tconv2x2_forward(x, w, b);
}

Tensor TConv2d::backward(const Tensor& grad_out) {
  require(cached, ErrorKind::StaleCache, "tconv backward without train-mode forward");
  cached = false;
  auto g = tconv2x2_backward(grad_out, x_cache, w);
  gw = std::move(g.w);
  gb = std::move(g.b);
  return std::move(g.x);
}

void TConv2d::collect(const std::string& prefix, std::vector<ParamSlot>& out) {
  out.push_back({prefix + ".w", &w, &gw});
  out.push_back({prefix + ".b", &b, &gb});
}

void BatchNorm::init(int channels) {
  gamma = Tensor({channels}, 1.0f);
  beta = Tensor({channels}, 0.0f);
  ggamma = Tensor::zeros_like(gamma);
  gbeta = Tensor::zeros_like(beta);
  running_mean = Tensor({channels}, 0.0f);
  running_var = Tensor({channels}, 1.0f);
}

Tensor BatchNorm::forward(const Tensor& x, Mode mode) {
  if (mode == Mode::Eval)
    return batchnorm_forward_eval(x, gamma, beta, running_mean, running_var, eps);
  cached = true;
  return batchnorm_forward_train(x, gamma, beta, &running_mean, &running_var, momentum, eps,
                                 &cache);
}

Tensor BatchNorm::backward(const Tensor& grad_out) {
  require(cached, ErrorKind::StaleCache, "batchnorm backward without train-mode forward");
  cached = false;
  auto g = batchnorm_backward(grad_out, cache, gamma);
  ggamma = std::move(g.gamma);
  gbeta = std::move(g.beta);
  return std::move(g.x);
}

void BatchNorm::collect(const std::string& prefix, std::vector<ParamSlot>& out) {
  out.push_back({prefix + ".gamma", &gamma, &ggamma});
  out.push_back({prefix + ".beta", &beta, &gbeta});
}

void BatchNorm::collect_buffers(const std::string& prefix, std::vector<BufferSlot>& out) {
  out.push_back({prefix + ".running_mean", &running_mean});
  out.push_back({prefix + ".running_var", &running_var});
}

Tensor ReLULayer::forward(const Tensor& x, Mode mode) {
  if (mode == Mode::Train) {
    x_cache = x;
    cached = true;
  }
  return relu_forward(x);
}

Tensor ReLULayer::backward(const Tensor& grad_out) {
  require(cached, ErrorKind::StaleCache, "relu backward without train-mode forward");
  cached = false;
  return relu_backward(grad_out, x_cache);
}

Tensor SigmoidLayer::forward(const Tensor& x, Mode mode) {
  Tensor y = sigmoid_forward(x);
  if (mode == Mode::Train) {
    y_cache = y;
    cached = true;
  }
  return y;
}

Tensor SigmoidLayer::backward(const Tensor& grad_out) {
  require(cached, ErrorKind::StaleCache, "sigmoid backward without train-mode forward");
  cached = false;
  return sigmoid_backward(grad_out, y_cache);
}

Tensor MaxPool::forward(const Tensor& x, Mode mode) {
  auto r = maxpool2x2_forward(x);
  if (mode == Mode::Train) {
    indices = std::move(r.indices);
    in_shape = x.shape;
    cached = true;
  } else {
    indices = std::move(r.indices);  // kept for unpool-mode decoders in eval
    in_shape = x.shape;
  }
  return std::move(r.out);
}

Tensor MaxPool::backward(const Tensor& grad_out) {
  require(cached, ErrorKind::StaleCache, "maxpool backward without train-mode forward");
  cached = false;
  return maxpool2x2_backward(grad_out, indices, in_shape);
}

void ConvBlock::init(int cin, int cout, Rng& rng) {
  c1.init(cin, cout, 3, rng);
  b1.init(cout);
  c2.init(cout, cout, 3, rng);
  b2.init(cout);
}

Tensor ConvBlock::forward(const Tensor& x, Mode mode) {
  Tensor y = r1.forward(b1.forward(c1.forward(x, mode), mode), mode);
  return r2.forward(b2.forward(c2.forward(y, mode), mode), mode);
}

Tensor ConvBlock::backward(const Tensor& grad_out) {
  Tensor g = c2.backward(b2.backward(r2.backward(grad_out)));
  return c1.backward(b1.backward(r1.backward(g)));
}

void ConvBlock::collect(const std::string& prefix, std::vector<ParamSlot>& out) {
  c1.collect(prefix + ".conv1", out);
  b1.collect(prefix + ".bn1", out);
  c2.collect(prefix + ".conv2", out);
  b2.collect(prefix + ".bn2", out);
}

void ConvBlock::collect_buffers(const std::string& prefix, std::vector<BufferSlot>& out) {
  b1.collect_buffers(prefix + ".bn1", out);
  b2.collect_buffers(prefix + ".bn2", out);
}

}  // namespace lunet::nn
