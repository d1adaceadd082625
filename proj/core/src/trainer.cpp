#include "lunet/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "lunet/rng.hpp"

namespace lunet::nn {

void TrainConfig::validate() const {
  require(learning_rate > 0, ErrorKind::InvalidConfig, "learning_rate must be > 0");
  require(epochs >= 1, ErrorKind::InvalidConfig, "epochs must be >= 1");
  require(batch_size >= 1, ErrorKind::InvalidConfig, "batch_size must be >= 1");
  require(adam_beta1 > 0 && adam_beta1 < 1 && adam_beta2 > 0 && adam_beta2 < 1,
          ErrorKind::InvalidConfig, "adam betas must be in (0,1)");
  require(early_stop_patience >= 1, ErrorKind::InvalidConfig, "patience must be >= 1");
  require(threshold > 0 && threshold < 1, ErrorKind::InvalidConfig, "threshold must be in (0,1)");
}

namespace {

// Packs the selected items into (B,1,H,W) image/mask tensors.
std::pair<Tensor, Tensor> make_batch(const SliceDataset& ds, const std::vector<size_t>& idx,
                                     size_t lo, size_t hi) {
  const auto& first = ds.items[idx[lo]].image;
  const int h = first.height, w = first.width;
  const int b = int(hi - lo);
  Tensor images({b, 1, h, w});
  Tensor masks({b, 1, h, w});
  for (size_t i = lo; i < hi; ++i) {
    const auto& item = ds.items[idx[i]];
    require(item.image.height == h && item.image.width == w, ErrorKind::ShapeMismatch,
            "all training images must share one size");
    const int64_t plane = int64_t(h) * w;
    std::copy(item.image.pixels.begin(), item.image.pixels.end(),
              images.data.begin() + int64_t(i - lo) * plane);
    std::copy(item.mask.pixels.begin(), item.mask.pixels.end(),
              masks.data.begin() + int64_t(i - lo) * plane);
  }
  return {std::move(images), std::move(masks)};
}

void binarize(Tensor& t, double threshold) {
  for (float& v : t.data) v = double(v) >= threshold ? 1.0f : 0.0f;
}

std::vector<size_t> split_indices(const SliceDataset& ds, Split split) {
  std::vector<size_t> idx;
  for (size_t i = 0; i < ds.items.size(); ++i)
    if (ds.split[i] == split) idx.push_back(i);
  return idx;
}

// Deep copy of every parameter and buffer, used for best-model restores.
std::vector<Tensor> snapshot(Model& m) {
  std::vector<Tensor> s;
  for (auto& p : m.params()) s.push_back(*p.value);
  for (auto& b : m.buffers()) s.push_back(*b.value);
  return s;
}

void restore(Model& m, const std::vector<Tensor>& s) {
  size_t i = 0;
  for (auto& p : m.params()) *p.value = s[i++];
  for (auto& b : m.buffers()) *b.value = s[i++];
}

}  // namespace

EvalResult evaluate_model(Model& model, const SliceDataset& dataset, Split split,
                          int batch_size, double threshold) {
  auto idx = split_indices(dataset, split);
  require(!idx.empty(), ErrorKind::EmptyDataset, "evaluation split is empty");

  EvalResult r;
  double loss_sum = 0.0;
  int64_t pixels = 0;
  for (size_t lo = 0; lo < idx.size(); lo += size_t(batch_size)) {
    size_t hi = std::min(idx.size(), lo + size_t(batch_size));
    auto [images, masks] = make_batch(dataset, idx, lo, hi);
    Tensor pred = model.forward(images, Mode::Eval);
    BceResult bce = bce_loss(pred, masks);
    loss_sum += bce.loss * double(pred.size());
    pixels += pred.size();
    binarize(pred, threshold);
    r.confusion.add(pred.data.data(), masks.data.data(), pred.size());
  }
  r.loss = loss_sum / double(pixels);
  r.report = compute(r.confusion, ClassMode::TwoClass);
  return r;
}

SliceImage predict_image(Model& model, const SliceImage& img) {
  Tensor x({1, 1, img.height, img.width});
  std::copy(img.pixels.begin(), img.pixels.end(), x.data.begin());
  Tensor y = model.forward(x, Mode::Eval);
  SliceImage out(img.height, img.width);
  out.plane = img.plane;
  out.source_id = img.source_id;
  out.slice_index = img.slice_index;
  std::copy(y.data.begin(), y.data.end(), out.pixels.begin());
  return out;
}

TrainResult train(Model& model, const SliceDataset& dataset, const TrainConfig& cfg,
                  const TrainSinks& sinks) {
  cfg.validate();
  auto train_idx = split_indices(dataset, Split::Train);
  require(!train_idx.empty(), ErrorKind::EmptyTrainSplit, "dataset has no train items");
  const Split val_split = dataset.count(Split::Test) > 0 ? Split::Test : Split::Train;

  AdamConfig adam_cfg{cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps};
  AdamState adam;
  auto params = model.params();

  TrainResult result;
  std::vector<Tensor> best_state = snapshot(model);
  double best_val_iou = -1.0;
  double best_val_loss = std::numeric_limits<double>::infinity();
  int stall = 0;
  int global_step = 0;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::vector<size_t> order = train_idx;
    Rng rng(mix_seed(cfg.seed, 0x7261494eull + uint64_t(epoch)));
    shuffle(order, rng);

    double epoch_loss = 0.0;
    int epoch_steps = 0;
    for (size_t lo = 0; lo < order.size(); lo += size_t(cfg.batch_size)) {
      size_t hi = std::min(order.size(), lo + size_t(cfg.batch_size));
      auto [images, masks] = make_batch(dataset, order, lo, hi);

      Tensor pred = model.forward(images, Mode::Train);
      BceResult bce = bce_loss(pred, masks);
      if (!std::isfinite(bce.loss)) fail(ErrorKind::DivergedLoss, "training loss is not finite");

      model.backward(bce.grad);
      adam_step(params, adam, adam_cfg);

      ++global_step;
      ++epoch_steps;
      epoch_loss += bce.loss;

      if (sinks.on_step) {
        binarize(pred, cfg.threshold);
        ConfusionAccumulator acc;
        acc.add(pred.data.data(), masks.data.data(), pred.size());
        auto [prec, rec] = precision_recall(acc);
        MetricsReport rep = compute(acc, ClassMode::TwoClass);
        sinks.on_step({epoch, global_step, bce.loss, prec, rec, rep.mean_iou});
      }
    }
    epoch_loss /= double(epoch_steps);
    result.epoch_train_loss.push_back(epoch_loss);
    result.epochs_run = epoch;

    EvalResult val = evaluate_model(model, dataset, val_split, cfg.batch_size, cfg.threshold);
    if (!std::isfinite(val.loss)) fail(ErrorKind::DivergedLoss, "validation loss is not finite");

    const bool improved = val.loss < best_val_loss - cfg.early_stop_min_delta;
    if (improved) {
      best_val_loss = val.loss;
      stall = 0;
    } else {
      ++stall;
    }
    if (val.report.mean_iou > best_val_iou) {
      best_val_iou = val.report.mean_iou;
      best_state = snapshot(model);
      result.best_epoch = epoch;
    }
    if (sinks.on_epoch)
      sinks.on_epoch({epoch, epoch_loss, val.loss, val.report.mean_iou, improved});

    if (stall >= cfg.early_stop_patience) {
      result.stopped_early = true;
      break;
    }
  }

  restore(model, best_state);
  result.best_val_iou = best_val_iou;
  result.best_val_loss = best_val_loss;
  return result;
}

StepCsvWriter::StepCsvWriter(const std::string& path) : f_(std::fopen(path.c_str(), "w")) {
  require(f_ != nullptr, ErrorKind::IoFailure, "cannot open " + path + " for writing");
  std::fputs("epoch,step,loss,precision,recall,iou\n", f_);
}

void StepCsvWriter::write(const StepLog& s) {
  std::fprintf(f_, "%d,%d,%.6f,%.6f,%.6f,%.6f\n", s.epoch, s.step, s.loss, s.precision, s.recall,
               s.iou);
}

StepCsvWriter::~StepCsvWriter() {
  if (f_) std::fclose(f_);
}

EpochCsvWriter::EpochCsvWriter(const std::string& path) : f_(std::fopen(path.c_str(), "w")) {
  require(f_ != nullptr, ErrorKind::IoFailure, "cannot open " + path + " for writing");
  std::fputs("epoch,train_loss,val_loss,val_iou,improved\n", f_);
}

void EpochCsvWriter::write(const EpochLog& e) {
  std::fprintf(f_, "%d,%.6f,%.6f,%.6f,%d\n", e.epoch, e.train_loss, e.val_loss, e.val_iou,
               e.improved ? 1 : 0);
}

EpochCsvWriter::~EpochCsvWriter() {
  if (f_) std::fclose(f_);
}

}  // namespace lunet::nn
