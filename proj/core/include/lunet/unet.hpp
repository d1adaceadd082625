#pragma once

#include "lunet/model.hpp"

namespace lunet::nn {

enum class UpsampleMode { TransposedConv, MaxUnpool };

UpsampleMode upsample_from_string(const std::string& s);
const char* to_string(UpsampleMode m);

struct UNetConfig {
  int base_filters = 16;
  int filter_step = 16;
  int depth = 4;
  int in_channels = 1;
  int out_channels = 1;
  UpsampleMode upsample = UpsampleMode::TransposedConv;
  int input_h = 128, input_w = 128;

  // Encoder block c runs base_filters + filter_step * c filters; the
  // bottleneck continues the progression at c = depth.
  int filters_at(int block) const { return base_filters + filter_step * block; }

  void validate() const;  // InvalidConfig
};

// Encoder: depth conv-blocks, each followed by 2x2 max pooling; bottleneck
// conv-block; decoder: per stage, upsample (transposed conv, or a 1x1
// channel projection + max-unpool with the paired encoder indices),
// concatenate the matching encoder block's pre-pool activation, conv-block;
// head: 1x1 conv + sigmoid.
class UNetModel : public Model {
 public:
  UNetModel(const UNetConfig& cfg, uint64_t seed);

  Tensor forward(const Tensor& x, Mode mode) override;
  void backward(const Tensor& grad_out) override;
  std::vector<ParamSlot> params() override;
  std::vector<BufferSlot> buffers() override;
  std::string kind() const override { return "unet"; }

  const UNetConfig& config() const { return cfg_; }

 private:
  UNetConfig cfg_;

  struct EncStage {
    ConvBlock block;
    MaxPool pool;
  };
  struct DecStage {
    TConv2d up;    // TransposedConv mode
    Conv2d proj;   // MaxUnpool mode: 1x1 conv to the skip's channel count
    ConvBlock block;
  };

  std::vector<EncStage> enc_;
  ConvBlock bottleneck_;
  std::vector<DecStage> dec_;  // dec_[c] pairs with enc_[c]
  Conv2d head_;
  SigmoidLayer out_act_;

  std::vector<Tensor> skip_grad_;
  std::vector<std::vector<int>> skip_shape_;
  bool have_caches_ = false;
};

}  // namespace lunet::nn
