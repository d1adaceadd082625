#include "lunet/loss.hpp"

#include <algorithm>
#include <cmath>

namespace lunet::nn {

BceResult bce_loss(const Tensor& pred, const Tensor& target) {
  check_same_shape(pred, target, "bce_loss");
  const int64_t n = pred.size();
  require(n > 0, ErrorKind::ShapeMismatch, "bce_loss on empty tensor");

  constexpr double kClamp = 1e-7;
  BceResult r;
  r.grad = Tensor(pred.shape);
  double sum = 0.0;
  const double inv_n = 1.0 / double(n);
  for (int64_t i = 0; i < n; ++i) {
    double p = std::clamp(double(pred.data[size_t(i)]), kClamp, 1.0 - kClamp);
    double y = double(target.data[size_t(i)]);
    sum += y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
    r.grad.data[size_t(i)] = float(-inv_n * (y / p - (1.0 - y) / (1.0 - p)));
  }
  r.loss = -sum * inv_n;
  return r;
}

}  // namespace lunet::nn
