#include "lunet/adam.hpp"

#include <cmath>

namespace lunet::nn {

void adam_step(std::vector<ParamSlot>& params, AdamState& state, const AdamConfig& cfg) {
  if (state.m.empty()) {
    for (auto& p : params) {
      state.m.push_back(Tensor::zeros_like(*p.value));
      state.v.push_back(Tensor::zeros_like(*p.value));
    }
  }
  require(state.m.size() == params.size(), ErrorKind::ShapeMismatch,
          "adam state does not match parameter list");

  state.t += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, double(state.t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, double(state.t));

  for (size_t i = 0; i < params.size(); ++i) {
    Tensor& p = *params[i].value;
    const Tensor& g = *params[i].grad;
    check_same_shape(p, g, "adam_step");
    Tensor& m = state.m[i];
    Tensor& v = state.v[i];
    for (size_t j = 0; j < p.data.size(); ++j) {
      const double gj = double(g.data[j]);
      const double mj = cfg.beta1 * double(m.data[j]) + (1.0 - cfg.beta1) * gj;
      const double vj = cfg.beta2 * double(v.data[j]) + (1.0 - cfg.beta2) * gj * gj;
      m.data[j] = float(mj);
      v.data[j] = float(vj);
      const double mhat = mj / bc1;
      const double vhat = vj / bc2;
      p.data[j] = float(double(p.data[j]) - cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps));
    }
  }
}

}  // namespace lunet::nn
