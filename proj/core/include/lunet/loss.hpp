#pragma once

#include "lunet/tensor.hpp"

namespace lunet::nn {

struct BceResult {
  double loss = 0.0;
  Tensor grad;  // dLoss/dpred
};

// Pixel-mean binary cross-entropy. Predictions are clamped to
// [1e-7, 1 - 1e-7] before the logs; the gradient is evaluated at the
// clamped value. The sum accumulates in real64.
BceResult bce_loss(const Tensor& pred, const Tensor& target);

}  // namespace lunet::nn
