#pragma once

#include "lunet/layers.hpp"

namespace lunet::nn {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First/second-moment tensors per parameter, allocated lazily on the first
// step. t counts optimizer steps and increments exactly once per step.
struct AdamState {
  std::vector<Tensor> m, v;
  int64_t t = 0;
};

// Bias-corrected Adam update applied to every slot in the given (fixed)
// order: p -= lr * mhat / (sqrt(vhat) + eps).
void adam_step(std::vector<ParamSlot>& params, AdamState& state, const AdamConfig& cfg);

}  // namespace lunet::nn
