#pragma once

#include <cstdint>
#include <utility>

#include "lunet/slice.hpp"

namespace lunet {

// Per-class pixel counts: n[i][j] = pixels of true class i predicted as
// class j (0 background, 1 foreground). Accumulators merge by elementwise
// addition, so per-image accumulation can run in parallel and reduce.
struct ConfusionAccumulator {
  uint64_t n[2][2] = {{0, 0}, {0, 0}};

  void add(const float* pred, const float* truth, int64_t count);
  void add(const SliceImage& pred, const SliceImage& truth);
  void merge(const ConfusionAccumulator& o);

  uint64_t total() const { return n[0][0] + n[0][1] + n[1][0] + n[1][1]; }
  uint64_t true_count(int cls) const { return n[cls][0] + n[cls][1]; }
  uint64_t pred_count(int cls) const { return n[0][cls] + n[1][cls]; }
};

// TwoClass averages the class-wise metrics over background and foreground;
// ForegroundOnly restricts the class-averaged metrics (mean accuracy, mean
// IoU) to the foreground class. Pixel accuracy and FWIoU always count both
// classes: they are global/frequency-weighted quantities.
enum class ClassMode { TwoClass, ForegroundOnly };

struct MetricsReport {
  double pixel_acc = 0, mean_acc = 0, mean_iou = 0, fwiou = 0;
  double precision = 0, recall = 0;
};

// Classes with t_i = 0 are excluded from the class means. If no class
// qualifies, the means report 0.
MetricsReport compute(const ConfusionAccumulator& acc, ClassMode mode = ClassMode::TwoClass);

// Foreground precision/recall. Empty-denominator convention: 1.0 when the
// other error count is also zero (nothing to find, nothing found), else 0.0.
std::pair<double, double> precision_recall(const ConfusionAccumulator& acc);

ClassMode class_mode_from_string(const std::string& s);
const char* to_string(ClassMode m);

}  // namespace lunet
