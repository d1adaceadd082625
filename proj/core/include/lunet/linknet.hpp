#pragma once

#include "lunet/model.hpp"

namespace lunet::nn {

struct LinkNetConfig {
  int base_filters = 8;
  int filter_step = 8;
  int depth = 4;
  int in_channels = 1;
  int out_channels = 1;
  int input_h = 128, input_w = 128;

  int filters_at(int block) const { return base_filters + filter_step * block; }
  void validate() const;
};

// Desk-scale LinkNet: 4 residual encoder blocks (two 3x3 convs plus an
// identity/1x1 shortcut, 2x downsample by max pooling) and decoder stages
// whose upsampled features are ADDED to the matching encoder activations
// instead of concatenated; sigmoid head. Trains with the same loss and
// optimizer settings as the U-Net.
class LinkNetLite : public Model {
 public:
  LinkNetLite(const LinkNetConfig& cfg, uint64_t seed);

  Tensor forward(const Tensor& x, Mode mode) override;
  void backward(const Tensor& grad_out) override;
  std::vector<ParamSlot> params() override;
  std::vector<BufferSlot> buffers() override;
  std::string kind() const override { return "linknet"; }

  const LinkNetConfig& config() const { return cfg_; }

 private:
  struct ResBlock {
    Conv2d c1, c2, shortcut;
    BatchNorm b1, b2;
    ReLULayer r1, r_out;
    bool has_shortcut = false;
    Tensor sum_cache;

    void init(int cin, int cout, Rng& rng);
    Tensor forward(const Tensor& x, Mode mode);
    Tensor backward(const Tensor& grad_out);
    void collect(const std::string& prefix, std::vector<ParamSlot>& out);
    void collect_buffers(const std::string& prefix, std::vector<BufferSlot>& out);
  };

  struct DecStage {
    TConv2d up;
    BatchNorm bn_up;
    ReLULayer r_up;
    Conv2d conv;
    BatchNorm bn2;
    ReLULayer r2;
  };

  LinkNetConfig cfg_;
  std::vector<ResBlock> enc_;
  std::vector<MaxPool> pool_;
  std::vector<DecStage> dec_;
  Conv2d head_;
  SigmoidLayer out_act_;

  std::vector<Tensor> skip_grad_;
  bool have_caches_ = false;
};

}  // namespace lunet::nn
