#pragma once

#include <functional>
#include <string>

#include "lunet/adam.hpp"
#include "lunet/loss.hpp"
#include "lunet/metrics.hpp"
#include "lunet/model.hpp"
#include "lunet/slice.hpp"

namespace lunet::nn {

struct TrainConfig {
  double learning_rate = 1e-4;
  int epochs = 10;
  int batch_size = 8;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  int early_stop_patience = 10;
  double early_stop_min_delta = 1e-4;
  uint64_t seed = 0;
  double threshold = 0.5;  // binarization for logged metrics

  void validate() const;
};

struct StepLog {
  int epoch = 0, step = 0;
  double loss = 0, precision = 0, recall = 0, iou = 0;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0;  // mean over the epoch's steps
  double val_loss = 0;
  double val_iou = 0;  // two-class mean IoU on the validation split
  bool improved = false;
};

struct TrainSinks {
  std::function<void(const StepLog&)> on_step;
  std::function<void(const EpochLog&)> on_epoch;
};

struct TrainResult {
  double best_val_iou = 0;
  double best_val_loss = 0;
  int best_epoch = 0;
  int epochs_run = 0;
  bool stopped_early = false;
  std::vector<double> epoch_train_loss;
};

// Epoch loop with deterministic seeded shuffling. After each epoch the model
// is evaluated on the Test split (falling back to the Train split when no
// test items exist); training stops early when validation loss fails to
// improve by min_delta for `patience` consecutive epochs. The returned model
// state is the checkpoint with the best validation IoU.
TrainResult train(Model& model, const SliceDataset& dataset, const TrainConfig& cfg,
                  const TrainSinks& sinks);

struct EvalResult {
  double loss = 0;
  MetricsReport report;
  ConfusionAccumulator confusion;
};

// Eval-mode pass over one split: pixel-weighted mean BCE plus confusion
// metrics of the thresholded predictions.
EvalResult evaluate_model(Model& model, const SliceDataset& dataset, Split split,
                          int batch_size, double threshold);

// Single-image eval forward; returns the probability map.
SliceImage predict_image(Model& model, const SliceImage& img);

// Step/epoch CSV sinks with the canonical 6-decimal formatting.
class StepCsvWriter {
 public:
  explicit StepCsvWriter(const std::string& path);
  void write(const StepLog& s);
  ~StepCsvWriter();

 private:
  FILE* f_;
};

class EpochCsvWriter {
 public:
  explicit EpochCsvWriter(const std::string& path);
  void write(const EpochLog& e);
  ~EpochCsvWriter();

 private:
  FILE* f_;
};

}  // namespace lunet::nn
