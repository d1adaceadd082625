#include "lunet/linknet.hpp"

namespace lunet::nn {

void LinkNetConfig::validate() const {
  require(base_filters >= 1 && filter_step >= 1, ErrorKind::InvalidConfig,
          "base_filters and filter_step must be >= 1");
  require(depth >= 1 && depth <= 6, ErrorKind::InvalidConfig, "depth must be in 1..6");
  const int div = 1 << depth;
  require(input_h >= div && input_w >= div && input_h % div == 0 && input_w % div == 0,
          ErrorKind::InvalidConfig,
          "input dims must be divisible by 2^depth = " + std::to_string(div));
}

void LinkNetLite::ResBlock::init(int cin, int cout, Rng& rng) {
  c1.init(cin, cout, 3, rng);
  b1.init(cout);
  c2.init(cout, cout, 3, rng);
  b2.init(cout);
  has_shortcut = cin != cout;
  if (has_shortcut) shortcut.init(cin, cout, 1, rng);
}

Tensor LinkNetLite::ResBlock::forward(const Tensor& x, Mode mode) {
  Tensor h = r1.forward(b1.forward(c1.forward(x, mode), mode), mode);
  h = b2.forward(c2.forward(h, mode), mode);
  Tensor s = has_shortcut ? shortcut.forward(x, mode) : x;
  Tensor y = add(h, s);
  return r_out.forward(y, mode);
}

Tensor LinkNetLite::ResBlock::backward(const Tensor& grad_out) {
  Tensor g = r_out.backward(grad_out);  // flows equally to both branches
  Tensor gx_main = c1.backward(b1.backward(r1.backward(c2.backward(b2.backward(g)))));
  Tensor gx_skip = has_shortcut ? shortcut.backward(g) : std::move(g);
  return add(gx_main, gx_skip);
}

void LinkNetLite::ResBlock::collect(const std::string& prefix, std::vector<ParamSlot>& out) {
  c1.collect(prefix + ".conv1", out);
  b1.collect(prefix + ".bn1", out);
  c2.collect(prefix + ".conv2", out);
  b2.collect(prefix + ".bn2", out);
  if (has_shortcut) shortcut.collect(prefix + ".shortcut", out);
}

void LinkNetLite::ResBlock::collect_buffers(const std::string& prefix,
                                            std::vector<BufferSlot>& out) {
  b1.collect_buffers(prefix + ".bn1", out);
  b2.collect_buffers(prefix + ".bn2", out);
}

LinkNetLite::LinkNetLite(const LinkNetConfig& cfg, uint64_t seed) : cfg_(cfg) {
  cfg_.validate();
  Rng rng(mix_seed(seed, 0x11a40e77ull));
  enc_.resize(size_t(cfg_.depth));
  pool_.resize(size_t(cfg_.depth));
  int cin = cfg_.in_channels;
  for (int c = 0; c < cfg_.depth; ++c) {
    enc_[size_t(c)].init(cin, cfg_.filters_at(c), rng);
    cin = cfg_.filters_at(c);
  }
  dec_.resize(size_t(cfg_.depth));
  for (int c = cfg_.depth - 1; c >= 0; --c) {
    auto& d = dec_[size_t(c)];
    const int fc = cfg_.filters_at(c);
    const int fout = c > 0 ? cfg_.filters_at(c - 1) : cfg_.filters_at(0);
    d.up.init(fc, fc, rng);
    d.bn_up.init(fc);
    d.conv.init(fc, fout, 3, rng);
    d.bn2.init(fout);
  }
  head_.init(cfg_.filters_at(0), cfg_.out_channels, 1, rng);
  skip_grad_.resize(size_t(cfg_.depth));
}

Tensor LinkNetLite::forward(const Tensor& x, Mode mode) {
  require(x.ndim() == 4 && x.dim(1) == cfg_.in_channels, ErrorKind::ShapeMismatch,
          "linknet input channel mismatch");
  const int div = 1 << cfg_.depth;
  require(x.dim(2) % div == 0 && x.dim(3) % div == 0, ErrorKind::ShapeMismatch,
          "linknet input H,W must be divisible by " + std::to_string(div));

  std::vector<Tensor> skips(size_t(cfg_.depth));
  Tensor cur = x;
  for (int c = 0; c < cfg_.depth; ++c) {
    Tensor a = enc_[size_t(c)].forward(cur, mode);
    cur = pool_[size_t(c)].forward(a, mode);
    skips[size_t(c)] = std::move(a);
  }
  for (int c = cfg_.depth - 1; c >= 0; --c) {
    auto& d = dec_[size_t(c)];
    Tensor u = d.r_up.forward(d.bn_up.forward(d.up.forward(cur, mode), mode), mode);
    Tensor s = add(u, skips[size_t(c)]);
    cur = d.r2.forward(d.bn2.forward(d.conv.forward(s, mode), mode), mode);
  }
  Tensor out = out_act_.forward(head_.forward(cur, mode), mode);
  out.assert_finite("linknet forward output");
  have_caches_ = mode == Mode::Train;
  return out;
}

void LinkNetLite::backward(const Tensor& grad_out) {
  require(have_caches_, ErrorKind::StaleCache, "backward requires a train-mode forward");
  have_caches_ = false;

  Tensor g = head_.backward(out_act_.backward(grad_out));
  for (int c = 0; c < cfg_.depth; ++c) {
    auto& d = dec_[size_t(c)];
    Tensor gs = d.conv.backward(d.bn2.backward(d.r2.backward(g)));
    skip_grad_[size_t(c)] = gs;  // add: same grad to the encoder activation
    g = d.up.backward(d.bn_up.backward(d.r_up.backward(gs)));
  }
  for (int c = cfg_.depth - 1; c >= 0; --c) {
    Tensor ga = pool_[size_t(c)].backward(g);
    ga = add(ga, skip_grad_[size_t(c)]);
    skip_grad_[size_t(c)] = Tensor();
    g = enc_[size_t(c)].backward(ga);
  }
}

std::vector<ParamSlot> LinkNetLite::params() {
  std::vector<ParamSlot> out;
  for (int c = 0; c < cfg_.depth; ++c)
    enc_[size_t(c)].collect("enc" + std::to_string(c), out);
  for (int c = cfg_.depth - 1; c >= 0; --c) {
    auto& d = dec_[size_t(c)];
    const std::string p = "dec" + std::to_string(c);
    d.up.collect(p + ".up", out);
    d.bn_up.collect(p + ".bn_up", out);
    d.conv.collect(p + ".conv", out);
    d.bn2.collect(p + ".bn2", out);
  }
  head_.collect("head", out);
  return out;
}

std::vector<BufferSlot> LinkNetLite::buffers() {
  std::vector<BufferSlot> out;
  for (int c = 0; c < cfg_.depth; ++c)
    enc_[size_t(c)].collect_buffers("enc" + std::to_string(c), out);
  for (int c = cfg_.depth - 1; c >= 0; --c) {
    auto& d = dec_[size_t(c)];
    const std::string p = "dec" + std::to_string(c);
    d.bn_up.collect_buffers(p + ".bn_up", out);
    d.bn2.collect_buffers(p + ".bn2", out);
  }
  return out;
}

}  // namespace lunet::nn
