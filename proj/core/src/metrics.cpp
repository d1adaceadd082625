#include "lunet/metrics.hpp"

#include <cmath>

#include "lunet/error.hpp"

namespace lunet {

void ConfusionAccumulator::add(const float* pred, const float* truth, int64_t count) {
  uint64_t local[2][2] = {{0, 0}, {0, 0}};
  for (int64_t i = 0; i < count; ++i) {
    float p = pred[i], t = truth[i];
    require((std::fabs(p) <= 1e-6f || std::fabs(p - 1.0f) <= 1e-6f) &&
                (std::fabs(t) <= 1e-6f || std::fabs(t - 1.0f) <= 1e-6f),
            ErrorKind::NonBinaryInput, "confusion counts need binary masks");
    ++local[t > 0.5f ? 1 : 0][p > 0.5f ? 1 : 0];
  }
  n[0][0] += local[0][0];
  n[0][1] += local[0][1];
  n[1][0] += local[1][0];
  n[1][1] += local[1][1];
}

void ConfusionAccumulator::add(const SliceImage& pred, const SliceImage& truth) {
  require(pred.height == truth.height && pred.width == truth.width, ErrorKind::ShapeMismatch,
          "prediction/truth size mismatch");
  add(pred.pixels.data(), truth.pixels.data(), pred.size());
}

void ConfusionAccumulator::merge(const ConfusionAccumulator& o) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) n[i][j] += o.n[i][j];
}

MetricsReport compute(const ConfusionAccumulator& acc, ClassMode mode) {
  const uint64_t total = acc.total();
  require(total > 0, ErrorKind::EmptyAccumulator, "no pixels accumulated");

  MetricsReport r;
  r.pixel_acc = double(acc.n[0][0] + acc.n[1][1]) / double(total);

  double iou[2] = {0, 0}, cls_acc[2] = {0, 0};
  bool present[2];
  for (int c = 0; c < 2; ++c) {
    const uint64_t t = acc.true_count(c);
    present[c] = t > 0;
    if (!present[c]) continue;
    cls_acc[c] = double(acc.n[c][c]) / double(t);
    // union = t_i + sum_j n_ji - n_ii
    const double uni = double(t + acc.pred_count(c) - acc.n[c][c]);
    iou[c] = uni > 0 ? double(acc.n[c][c]) / uni : 0.0;
  }

  const int lo = mode == ClassMode::ForegroundOnly ? 1 : 0;
  int n_cl = 0;
  double acc_sum = 0, iou_sum = 0;
  for (int c = lo; c < 2; ++c) {
    if (!present[c]) continue;
    ++n_cl;
    acc_sum += cls_acc[c];
    iou_sum += iou[c];
  }
  r.mean_acc = n_cl > 0 ? acc_sum / n_cl : 0.0;
  r.mean_iou = n_cl > 0 ? iou_sum / n_cl : 0.0;

  double fw = 0;
  for (int c = 0; c < 2; ++c)
    if (present[c]) fw += double(acc.true_count(c)) * iou[c];
  r.fwiou = fw / double(total);

  auto [prec, rec] = precision_recall(acc);
  r.precision = prec;
  r.recall = rec;
  return r;
}

std::pair<double, double> precision_recall(const ConfusionAccumulator& acc) {
  require(acc.total() > 0, ErrorKind::EmptyAccumulator, "no pixels accumulated");
  const uint64_t tp = acc.n[1][1], fp = acc.n[0][1], fn = acc.n[1][0];
  double precision = (tp + fp) > 0 ? double(tp) / double(tp + fp) : (fn == 0 ? 1.0 : 0.0);
  double recall = (tp + fn) > 0 ? double(tp) / double(tp + fn) : (fp == 0 ? 1.0 : 0.0);
  return {precision, recall};
}

ClassMode class_mode_from_string(const std::string& s) {
  if (s == "two") return ClassMode::TwoClass;
  if (s == "fg") return ClassMode::ForegroundOnly;
  fail(ErrorKind::UsageError, "unknown class mode '" + s + "' (expected two|fg)");
}

const char* to_string(ClassMode m) {
  return m == ClassMode::TwoClass ? "two" : "fg";
}

}  // namespace lunet
