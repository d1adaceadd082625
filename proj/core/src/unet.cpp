#include "lunet/unet.hpp"

namespace lunet::nn {

UpsampleMode upsample_from_string(const std::string& s) {
  if (s == "tconv") return UpsampleMode::TransposedConv;
  if (s == "unpool") return UpsampleMode::MaxUnpool;
  fail(ErrorKind::UsageError, "unknown upsample mode '" + s + "' (expected tconv|unpool)");
}

const char* to_string(UpsampleMode m) {
  return m == UpsampleMode::TransposedConv ? "tconv" : "unpool";
}

void UNetConfig::validate() const {
  require(base_filters >= 1 && filter_step >= 1, ErrorKind::InvalidConfig,
          "base_filters and filter_step must be >= 1");
  require(depth >= 1 && depth <= 6, ErrorKind::InvalidConfig, "depth must be in 1..6");
  require(in_channels >= 1 && out_channels >= 1, ErrorKind::InvalidConfig,
          "channel counts must be >= 1");
  const int div = 1 << depth;
  require(input_h >= div && input_w >= div && input_h % div == 0 && input_w % div == 0,
          ErrorKind::InvalidConfig,
          "input dims must be divisible by 2^depth = " + std::to_string(div));
}

UNetModel::UNetModel(const UNetConfig& cfg, uint64_t seed) : cfg_(cfg) {
  cfg_.validate();
  Rng rng(mix_seed(seed, 0x00e77e11ull));

  enc_.resize(size_t(cfg_.depth));
  int cin = cfg_.in_channels;
  for (int c = 0; c < cfg_.depth; ++c) {
    enc_[size_t(c)].block.init(cin, cfg_.filters_at(c), rng);
    cin = cfg_.filters_at(c);
  }
  bottleneck_.init(cin, cfg_.filters_at(cfg_.depth), rng);

  dec_.resize(size_t(cfg_.depth));
  int cur = cfg_.filters_at(cfg_.depth);
  for (int c = cfg_.depth - 1; c >= 0; --c) {
    const int skip = cfg_.filters_at(c);
    auto& d = dec_[size_t(c)];
    if (cfg_.upsample == UpsampleMode::TransposedConv)
      d.up.init(cur, skip, rng);
    else
      d.proj.init(cur, skip, 1, rng);
    d.block.init(2 * skip, skip, rng);
    cur = skip;
  }
  head_.init(cur, cfg_.out_channels, 1, rng);

  skip_grad_.resize(size_t(cfg_.depth));
  skip_shape_.resize(size_t(cfg_.depth));
}

Tensor UNetModel::forward(const Tensor& x, Mode mode) {
  require(x.ndim() == 4 && x.dim(1) == cfg_.in_channels, ErrorKind::ShapeMismatch,
          "unet input must be (N," + std::to_string(cfg_.in_channels) + ",H,W)");
  const int div = 1 << cfg_.depth;
  require(x.dim(2) % div == 0 && x.dim(3) % div == 0, ErrorKind::ShapeMismatch,
          "unet input H,W must be divisible by " + std::to_string(div));

  std::vector<Tensor> skips(size_t(cfg_.depth));
  Tensor cur = x;
  for (int c = 0; c < cfg_.depth; ++c) {
    Tensor a = enc_[size_t(c)].block.forward(cur, mode);
    skip_shape_[size_t(c)] = a.shape;
    cur = enc_[size_t(c)].pool.forward(a, mode);
    skips[size_t(c)] = std::move(a);
  }
  cur = bottleneck_.forward(cur, mode);
  for (int c = cfg_.depth - 1; c >= 0; --c) {
    auto& d = dec_[size_t(c)];
    Tensor up;
    if (cfg_.upsample == UpsampleMode::TransposedConv) {
      up = d.up.forward(cur, mode);
    } else {
      Tensor t = d.proj.forward(cur, mode);
      up = maxunpool2x2(t, enc_[size_t(c)].pool.indices, skip_shape_[size_t(c)]);
    }
    Tensor z = concat_channels(up, skips[size_t(c)]);
    cur = d.block.forward(z, mode);
  }
  Tensor out = out_act_.forward(head_.forward(cur, mode), mode);
  out.assert_finite("unet forward output");
  have_caches_ = mode == Mode::Train;
  return out;
}

void UNetModel::backward(const Tensor& grad_out) {
  require(have_caches_, ErrorKind::StaleCache, "backward requires a train-mode forward");
  have_caches_ = false;

  Tensor g = head_.backward(out_act_.backward(grad_out));
  for (int c = 0; c < cfg_.depth; ++c) {
    auto& d = dec_[size_t(c)];
    g = d.block.backward(g);
    const int skip = cfg_.filters_at(c);
    auto [gu, ga] = split_channels(g, skip, skip);
    skip_grad_[size_t(c)] = std::move(ga);
    if (cfg_.upsample == UpsampleMode::TransposedConv) {
      g = d.up.backward(gu);
    } else {
      Tensor gt = maxunpool2x2_backward(gu, enc_[size_t(c)].pool.indices,
                                        std::vector<int>{gu.dim(0), gu.dim(1), gu.dim(2) / 2,
                                                         gu.dim(3) / 2});
      g = d.proj.backward(gt);
    }
  }
  g = bottleneck_.backward(g);
  for (int c = cfg_.depth - 1; c >= 0; --c) {
    Tensor ga = enc_[size_t(c)].pool.backward(g);
    ga = add(ga, skip_grad_[size_t(c)]);
    skip_grad_[size_t(c)] = Tensor();
    g = enc_[size_t(c)].block.backward(ga);
  }
}

std::vector<ParamSlot> UNetModel::params() {
  std::vector<ParamSlot> out;
  for (int c = 0; c < cfg_.depth; ++c)
    enc_[size_t(c)].block.collect("enc" + std::to_string(c), out);
  bottleneck_.collect("bottleneck", out);
  for (int c = cfg_.depth - 1; c >= 0; --c) {
    auto& d = dec_[size_t(c)];
    const std::string p = "dec" + std::to_string(c);
    if (cfg_.upsample == UpsampleMode::TransposedConv)
      d.up.collect(p + ".up", out);
    else
      d.proj.collect(p + ".proj", out);
    d.block.collect(p, out);
  }
  head_.collect("head", out);
  return out;
}

std::vector<BufferSlot> UNetModel::buffers() {
  std::vector<BufferSlot> out;
  for (int c = 0; c < cfg_.depth; ++c)
    enc_[size_t(c)].block.collect_buffers("enc" + std::to_string(c), out);
  bottleneck_.collect_buffers("bottleneck", out);
  for (int c = cfg_.depth - 1; c >= 0; --c)
    dec_[size_t(c)].block.collect_buffers("dec" + std::to_string(c), out);
  return out;
}

}  // namespace lunet::nn
