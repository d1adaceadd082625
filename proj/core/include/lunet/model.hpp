#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lunet/layers.hpp"

namespace lunet::nn {

// A segmentation network with a fixed forward/backward schedule. forward in
// Train mode retains per-layer caches; backward consumes them strictly in
// reverse forward order and fills every parameter's gradient slot.
class Model {
 public:
  virtual ~Model() = default;

  virtual Tensor forward(const Tensor& x, Mode mode) = 0;
  virtual void backward(const Tensor& grad_out) = 0;

  // Parameter and buffer slots in fixed build order.
  virtual std::vector<ParamSlot> params() = 0;
  virtual std::vector<BufferSlot> buffers() = 0;

  virtual std::string kind() const = 0;

  void zero_grads() {
    for (auto& p : params()) p.grad->fill(0.0f);
  }

  int64_t param_count() {
    int64_t n = 0;
    for (auto& p : params()) n += p.value->size();
    return n;
  }
};

}  // namespace lunet::nn
