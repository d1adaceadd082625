#include "lunet/ops.hpp"

#include <algorithm>
#include <cmath>

namespace lunet::nn {

namespace {

template <typename T>
void check_conv_shapes(const TensorT<T>& x, const TensorT<T>& w, const TensorT<T>& b, int pad) {
  require(x.ndim() == 4 && w.ndim() == 4 && b.ndim() == 1, ErrorKind::ShapeMismatch,
          "conv2d expects 4-d input, 4-d weight, 1-d bias");
  int k = w.dim(2);
  require(k == w.dim(3) && (k == 3 || k == 1), ErrorKind::ShapeMismatch,
          "conv2d kernel must be 3x3 or 1x1");
  require(pad == k / 2, ErrorKind::ShapeMismatch, "conv2d pad must preserve spatial dims");
  require(w.dim(1) == x.dim(1), ErrorKind::ShapeMismatch, "conv2d channel mismatch");
  require(b.dim(0) == w.dim(0), ErrorKind::ShapeMismatch, "conv2d bias mismatch");
}

// Patch matrix col[k*J + j] with k = (ci*kk + kh)*kk + kw and j = oh*W + ow.
// The k order here defines the accumulation order both conv paths share.
template <typename T>
void im2col(const T* x, int cin, int h, int w, int kk, int pad, T* col) {
  const int64_t plane = int64_t(h) * w;
  for (int ci = 0; ci < cin; ++ci) {
    for (int kh = 0; kh < kk; ++kh) {
      for (int kw = 0; kw < kk; ++kw) {
        T* dst = col;
        col += plane;
        const T* src = x + ci * plane;
        for (int oh = 0; oh < h; ++oh) {
          int ih = oh + kh - pad;
          if (ih < 0 || ih >= h) {
            for (int ow = 0; ow < w; ++ow) *dst++ = T(0);
            continue;
          }
          const T* row = src + int64_t(ih) * w;
          for (int ow = 0; ow < w; ++ow) {
            int iw = ow + kw - pad;
            *dst++ = (iw >= 0 && iw < w) ? row[iw] : T(0);
          }
        }
      }
    }
  }
}

}  // namespace

template <typename T>
TensorT<T> conv2d_forward(const TensorT<T>& x, const TensorT<T>& w, const TensorT<T>& b,
                          int pad, ConvAlgo algo) {
  check_conv_shapes(x, w, b, pad);
  const int n = x.dim(0), cin = x.dim(1), h = x.dim(2), wd = x.dim(3);
  const int cout = w.dim(0), kk = w.dim(2);
  TensorT<T> out({n, cout, h, wd});
  if (algo == ConvAlgo::Auto) algo = ConvAlgo::Im2col;

  if (algo == ConvAlgo::Loop) {
    for (int ni = 0; ni < n; ++ni) {
      for (int co = 0; co < cout; ++co) {
        const T* wk = &w.data[size_t(co) * cin * kk * kk];
        for (int oh = 0; oh < h; ++oh) {
          for (int ow = 0; ow < wd; ++ow) {
            double acc = double(b.data[size_t(co)]);
            int ki = 0;
            for (int ci = 0; ci < cin; ++ci) {
              for (int kh = 0; kh < kk; ++kh) {
                for (int kw = 0; kw < kk; ++kw, ++ki) {
                  int ih = oh + kh - pad, iw = ow + kw - pad;
                  T xv = (ih >= 0 && ih < h && iw >= 0 && iw < wd) ? x.at(ni, ci, ih, iw) : T(0);
                  acc += double(xv) * double(wk[ki]);
                }
              }
            }
            out.at(ni, co, oh, ow) = T(acc);
          }
        }
      }
    }
    return out;
  }

  const int64_t jj = int64_t(h) * wd;
  const int64_t kt = int64_t(cin) * kk * kk;
  std::vector<T> col(size_t(kt * jj));
  std::vector<double> acc(size_t(jj));
  for (int ni = 0; ni < n; ++ni) {
    im2col(&x.data[size_t(ni) * cin * jj], cin, h, wd, kk, pad, col.data());
    for (int co = 0; co < cout; ++co) {
      std::fill(acc.begin(), acc.end(), double(b.data[size_t(co)]));
      const T* wk = &w.data[size_t(co) * kt];
      for (int64_t k = 0; k < kt; ++k) {
        const double wv = double(wk[k]);
        const T* cr = &col[size_t(k * jj)];
        for (int64_t j = 0; j < jj; ++j) acc[size_t(j)] += wv * double(cr[j]);
      }
      T* dst = &out.data[size_t((int64_t(ni) * cout + co) * jj)];
      for (int64_t j = 0; j < jj; ++j) dst[j] = T(acc[size_t(j)]);
    }
  }
  return out;
}

template <typename T>
ConvGrads<T> conv2d_backward(const TensorT<T>& grad_out, const TensorT<T>& x,
                             const TensorT<T>& w, int pad) {
  const int n = x.dim(0), cin = x.dim(1), h = x.dim(2), wd = x.dim(3);
  const int cout = w.dim(0), kk = w.dim(2);
  require(grad_out.ndim() == 4 && grad_out.dim(0) == n && grad_out.dim(1) == cout &&
              grad_out.dim(2) == h && grad_out.dim(3) == wd,
          ErrorKind::ShapeMismatch, "conv2d_backward grad shape");

  ConvGrads<T> g{TensorT<T>(x.shape), TensorT<T>(w.shape), TensorT<T>({cout})};
  const int64_t jj = int64_t(h) * wd;
  const int64_t kt = int64_t(cin) * kk * kk;

  std::vector<double> gw(size_t(kt) * cout, 0.0);
  std::vector<double> gb(size_t(cout), 0.0);
  std::vector<T> col(size_t(kt * jj));
  std::vector<double> gcol(size_t(kt * jj));
  std::vector<double> gx(size_t(int64_t(cin) * jj));

  for (int ni = 0; ni < n; ++ni) {
    const T* gout = &grad_out.data[size_t(int64_t(ni) * cout * jj)];
    im2col(&x.data[size_t(int64_t(ni) * cin * jj)], cin, h, wd, kk, pad, col.data());

    std::fill(gcol.begin(), gcol.end(), 0.0);
    for (int co = 0; co < cout; ++co) {
      const T* gr = gout + int64_t(co) * jj;
      double bs = 0.0;
      for (int64_t j = 0; j < jj; ++j) bs += double(gr[j]);
      gb[size_t(co)] += bs;

      const T* wk = &w.data[size_t(co) * kt];
      double* gwk = &gw[size_t(co) * kt];
      for (int64_t k = 0; k < kt; ++k) {
        const T* cr = &col[size_t(k * jj)];
        double ws = 0.0;
        for (int64_t j = 0; j < jj; ++j) ws += double(gr[j]) * double(cr[j]);
        gwk[size_t(k)] += ws;

        const double wv = double(wk[k]);
        double* gc = &gcol[size_t(k * jj)];
        for (int64_t j = 0; j < jj; ++j) gc[j] += wv * double(gr[j]);
      }
    }

    // col2im: scatter-add patch gradients back to input positions.
    std::fill(gx.begin(), gx.end(), 0.0);
    int64_t k = 0;
    for (int ci = 0; ci < cin; ++ci) {
      for (int kh = 0; kh < kk; ++kh) {
        for (int kw = 0; kw < kk; ++kw, ++k) {
          const double* gc = &gcol[size_t(k * jj)];
          double* gp = &gx[size_t(int64_t(ci) * jj)];
          for (int oh = 0; oh < h; ++oh) {
            int ih = oh + kh - pad;
            if (ih < 0 || ih >= h) continue;
            for (int ow = 0; ow < wd; ++ow) {
              int iw = ow + kw - pad;
              if (iw < 0 || iw >= wd) continue;
              gp[int64_t(ih) * wd + iw] += gc[int64_t(oh) * wd + ow];
            }
          }
        }
      }
    }
    T* gxd = &g.x.data[size_t(int64_t(ni) * cin * jj)];
    for (size_t i = 0; i < gx.size(); ++i) gxd[i] = T(gx[i]);
  }

  for (size_t i = 0; i < gw.size(); ++i) g.w.data[i] = T(gw[i]);
  for (size_t i = 0; i < gb.size(); ++i) g.b.data[i] = T(gb[i]);
  return g;
}

template <typename T>
TensorT<T> tconv2x2_forward(const TensorT<T>& x, const TensorT<T>& w, const TensorT<T>& b) {
  require(x.ndim() == 4 && w.ndim() == 4 && w.dim(2) == 2 && w.dim(3) == 2,
          ErrorKind::ShapeMismatch, "tconv2x2 expects 4-d input and (Cin,Cout,2,2) weight");
  require(w.dim(0) == x.dim(1), ErrorKind::ShapeMismatch, "tconv2x2 channel mismatch");
  require(b.ndim() == 1 && b.dim(0) == w.dim(1), ErrorKind::ShapeMismatch, "tconv2x2 bias mismatch");
  const int n = x.dim(0), cin = x.dim(1), h = x.dim(2), wd = x.dim(3);
  const int cout = w.dim(1);
  TensorT<T> out({n, cout, 2 * h, 2 * wd});
  for (int ni = 0; ni < n; ++ni) {
    for (int co = 0; co < cout; ++co) {
      for (int ih = 0; ih < h; ++ih) {
        for (int iw = 0; iw < wd; ++iw) {
          for (int kh = 0; kh < 2; ++kh) {
            for (int kw = 0; kw < 2; ++kw) {
              double acc = double(b.data[size_t(co)]);
              for (int ci = 0; ci < cin; ++ci) {
                acc += double(x.at(ni, ci, ih, iw)) *
                       double(w.data[size_t(((int64_t(ci) * cout + co) * 2 + kh) * 2 + kw)]);
              }
              out.at(ni, co, 2 * ih + kh, 2 * iw + kw) = T(acc);
            }
          }
        }
      }
    }
  }
  return out;
}

template <typename T>
ConvGrads<T> tconv2x2_backward(const TensorT<T>& grad_out, const TensorT<T>& x,
                               const TensorT<T>& w) {
  const int n = x.dim(0), cin = x.dim(1), h = x.dim(2), wd = x.dim(3);
  const int cout = w.dim(1);
  require(grad_out.ndim() == 4 && grad_out.dim(0) == n && grad_out.dim(1) == cout &&
              grad_out.dim(2) == 2 * h && grad_out.dim(3) == 2 * wd,
          ErrorKind::ShapeMismatch, "tconv2x2_backward grad shape");
  ConvGrads<T> g{TensorT<T>(x.shape), TensorT<T>(w.shape), TensorT<T>({cout})};

  std::vector<double> gw(w.data.size(), 0.0);
  std::vector<double> gb(size_t(cout), 0.0);
  for (int ni = 0; ni < n; ++ni) {
    for (int ci = 0; ci < cin; ++ci) {
      for (int ih = 0; ih < h; ++ih) {
        for (int iw = 0; iw < wd; ++iw) {
          double gx = 0.0;
          for (int co = 0; co < cout; ++co) {
            for (int kh = 0; kh < 2; ++kh) {
              for (int kw = 0; kw < 2; ++kw) {
                double go = double(grad_out.at(ni, co, 2 * ih + kh, 2 * iw + kw));
                size_t wi = size_t(((int64_t(ci) * cout + co) * 2 + kh) * 2 + kw);
                gx += double(w.data[wi]) * go;
                gw[wi] += double(x.at(ni, ci, ih, iw)) * go;
              }
            }
          }
          g.x.at(ni, ci, ih, iw) = T(gx);
        }
      }
    }
    for (int co = 0; co < cout; ++co) {
      const T* gr = &grad_out.data[size_t((int64_t(ni) * cout + co) * 4 * h * wd)];
      double s = 0.0;
      for (int64_t j = 0; j < int64_t(4) * h * wd; ++j) s += double(gr[j]);
      gb[size_t(co)] += s;
    }
  }
  for (size_t i = 0; i < gw.size(); ++i) g.w.data[i] = T(gw[i]);
  for (int co = 0; co < cout; ++co) g.b.data[size_t(co)] = T(gb[size_t(co)]);
  return g;
}

template <typename T>
TensorT<T> batchnorm_forward_train(const TensorT<T>& x, const TensorT<T>& gamma,
                                   const TensorT<T>& beta, TensorT<T>* running_mean,
                                   TensorT<T>* running_var, T momentum, T eps,
                                   BnCache<T>* cache) {
  require(x.ndim() == 4, ErrorKind::ShapeMismatch, "batchnorm expects 4-d input");
  const int n = x.dim(0), c = x.dim(1), h = x.dim(2), wd = x.dim(3);
  require(gamma.dim(0) == c && beta.dim(0) == c, ErrorKind::ShapeMismatch, "batchnorm param size");
  const int64_t m = int64_t(n) * h * wd;
  require(m > 1, ErrorKind::NumericalFault, "single-element batch: variance undefined");

  TensorT<T> out(x.shape);
  if (cache) {
    cache->xhat = TensorT<T>(x.shape);
    cache->inv_std.assign(size_t(c), T(0));
  }
  const int64_t plane = int64_t(h) * wd;
  for (int ci = 0; ci < c; ++ci) {
    double sum = 0.0;
    for (int ni = 0; ni < n; ++ni) {
      const T* p = &x.data[size_t((int64_t(ni) * c + ci) * plane)];
      for (int64_t j = 0; j < plane; ++j) sum += double(p[j]);
    }
    const double mean = sum / double(m);
    double sq = 0.0;
    for (int ni = 0; ni < n; ++ni) {
      const T* p = &x.data[size_t((int64_t(ni) * c + ci) * plane)];
      for (int64_t j = 0; j < plane; ++j) {
        double d = double(p[j]) - mean;
        sq += d * d;
      }
    }
    const double var = sq / double(m);
    const double inv_std = 1.0 / std::sqrt(var + double(eps));
    const double gm = double(gamma.data[size_t(ci)]);
    const double bt = double(beta.data[size_t(ci)]);
    for (int ni = 0; ni < n; ++ni) {
      const T* p = &x.data[size_t((int64_t(ni) * c + ci) * plane)];
      T* o = &out.data[size_t((int64_t(ni) * c + ci) * plane)];
      T* xh = cache ? &cache->xhat.data[size_t((int64_t(ni) * c + ci) * plane)] : nullptr;
      for (int64_t j = 0; j < plane; ++j) {
        double v = (double(p[j]) - mean) * inv_std;
        if (xh) xh[j] = T(v);
        o[j] = T(gm * v + bt);
      }
    }
    if (cache) cache->inv_std[size_t(ci)] = T(inv_std);
    if (running_mean && running_var) {
      running_mean->data[size_t(ci)] =
          T(momentum * double(running_mean->data[size_t(ci)]) + (1.0 - double(momentum)) * mean);
      running_var->data[size_t(ci)] =
          T(momentum * double(running_var->data[size_t(ci)]) + (1.0 - double(momentum)) * var);
    }
  }
  return out;
}

template <typename T>
TensorT<T> batchnorm_forward_eval(const TensorT<T>& x, const TensorT<T>& gamma,
                                  const TensorT<T>& beta, const TensorT<T>& running_mean,
                                  const TensorT<T>& running_var, T eps) {
  require(x.ndim() == 4, ErrorKind::ShapeMismatch, "batchnorm expects 4-d input");
  const int n = x.dim(0), c = x.dim(1), h = x.dim(2), wd = x.dim(3);
  TensorT<T> out(x.shape);
  const int64_t plane = int64_t(h) * wd;
  for (int ci = 0; ci < c; ++ci) {
    const double inv_std = 1.0 / std::sqrt(double(running_var.data[size_t(ci)]) + double(eps));
    const double scale = double(gamma.data[size_t(ci)]) * inv_std;
    const double shift =
        double(beta.data[size_t(ci)]) - double(running_mean.data[size_t(ci)]) * scale;
    for (int ni = 0; ni < n; ++ni) {
      const T* p = &x.data[size_t((int64_t(ni) * c + ci) * plane)];
      T* o = &out.data[size_t((int64_t(ni) * c + ci) * plane)];
      for (int64_t j = 0; j < plane; ++j) o[j] = T(scale * double(p[j]) + shift);
    }
  }
  return out;
}

template <typename T>
BnGrads<T> batchnorm_backward(const TensorT<T>& grad_out, const BnCache<T>& cache,
                              const TensorT<T>& gamma) {
  require(!cache.xhat.data.empty(), ErrorKind::StaleCache, "batchnorm_backward without forward");
  check_same_shape(grad_out, cache.xhat, "batchnorm_backward");
  const int n = grad_out.dim(0), c = grad_out.dim(1), h = grad_out.dim(2), wd = grad_out.dim(3);
  const int64_t m = int64_t(n) * h * wd;
  const int64_t plane = int64_t(h) * wd;

  BnGrads<T> g{TensorT<T>(grad_out.shape), TensorT<T>({c}), TensorT<T>({c})};
  for (int ci = 0; ci < c; ++ci) {
    double s1 = 0.0, s2 = 0.0;
    for (int ni = 0; ni < n; ++ni) {
      const T* gr = &grad_out.data[size_t((int64_t(ni) * c + ci) * plane)];
      const T* xh = &cache.xhat.data[size_t((int64_t(ni) * c + ci) * plane)];
      for (int64_t j = 0; j < plane; ++j) {
        s1 += double(gr[j]);
        s2 += double(gr[j]) * double(xh[j]);
      }
    }
    g.beta.data[size_t(ci)] = T(s1);
    g.gamma.data[size_t(ci)] = T(s2);
    const double k = double(gamma.data[size_t(ci)]) * double(cache.inv_std[size_t(ci)]);
    const double a = s1 / double(m), b = s2 / double(m);
    for (int ni = 0; ni < n; ++ni) {
      const T* gr = &grad_out.data[size_t((int64_t(ni) * c + ci) * plane)];
      const T* xh = &cache.xhat.data[size_t((int64_t(ni) * c + ci) * plane)];
      T* gx = &g.x.data[size_t((int64_t(ni) * c + ci) * plane)];
      for (int64_t j = 0; j < plane; ++j)
        gx[j] = T(k * (double(gr[j]) - a - double(xh[j]) * b));
    }
  }
  return g;
}

template <typename T>
TensorT<T> relu_forward(const TensorT<T>& x) {
  TensorT<T> out(x.shape);
  for (size_t i = 0; i < x.data.size(); ++i) out.data[i] = x.data[i] > T(0) ? x.data[i] : T(0);
  return out;
}

template <typename T>
TensorT<T> relu_backward(const TensorT<T>& grad_out, const TensorT<T>& x) {
  check_same_shape(grad_out, x, "relu_backward");
  TensorT<T> g(x.shape);
  for (size_t i = 0; i < x.data.size(); ++i) g.data[i] = x.data[i] > T(0) ? grad_out.data[i] : T(0);
  return g;
}

template <typename T>
TensorT<T> sigmoid_forward(const TensorT<T>& x) {
  TensorT<T> out(x.shape);
  for (size_t i = 0; i < x.data.size(); ++i) {
    double v = double(x.data[i]);
    double y;
    if (v >= 0.0) {
      y = 1.0 / (1.0 + std::exp(-v));
    } else {
      double e = std::exp(v);
      y = e / (1.0 + e);
    }
    out.data[i] = T(y);
  }
  return out;
}

template <typename T>
TensorT<T> sigmoid_backward(const TensorT<T>& grad_out, const TensorT<T>& y) {
  check_same_shape(grad_out, y, "sigmoid_backward");
  TensorT<T> g(y.shape);
  for (size_t i = 0; i < y.data.size(); ++i) {
    double yv = double(y.data[i]);
    g.data[i] = T(double(grad_out.data[i]) * yv * (1.0 - yv));
  }
  return g;
}

template <typename T>
PoolOut<T> maxpool2x2_forward(const TensorT<T>& x) {
  require(x.ndim() == 4, ErrorKind::ShapeMismatch, "maxpool expects 4-d input");
  const int n = x.dim(0), c = x.dim(1), h = x.dim(2), wd = x.dim(3);
  require(h % 2 == 0 && wd % 2 == 0, ErrorKind::OddSpatialDim, "maxpool needs even H and W");
  PoolOut<T> r{TensorT<T>({n, c, h / 2, wd / 2}), {}};
  r.indices.resize(r.out.data.size());
  int64_t oi = 0;
  for (int ni = 0; ni < n; ++ni) {
    for (int ci = 0; ci < c; ++ci) {
      for (int oh = 0; oh < h / 2; ++oh) {
        for (int ow = 0; ow < wd / 2; ++ow, ++oi) {
          int64_t base = x.offset(ni, ci, 2 * oh, 2 * ow);
          T best = x.data[size_t(base)];
          int64_t best_idx = base;
          // scan in flat order so ties keep the smallest flat index
          const int64_t cand[3] = {base + 1, base + wd, base + wd + 1};
          for (int64_t idx : cand) {
            if (x.data[size_t(idx)] > best) {
              best = x.data[size_t(idx)];
              best_idx = idx;
            }
          }
          r.out.data[size_t(oi)] = best;
          r.indices[size_t(oi)] = best_idx;
        }
      }
    }
  }
  return r;
}

template <typename T>
TensorT<T> maxpool2x2_backward(const TensorT<T>& grad_out, const std::vector<int64_t>& indices,
                               const std::vector<int>& in_shape) {
  require(grad_out.data.size() == indices.size(), ErrorKind::StaleCache,
          "maxpool_backward: indices do not match grad");
  TensorT<T> g(in_shape);
  for (size_t i = 0; i < indices.size(); ++i) {
    require(indices[i] >= 0 && indices[i] < g.size(), ErrorKind::IndexOutOfRange,
            "maxpool index outside input tensor");
    g.data[size_t(indices[i])] += grad_out.data[i];
  }
  return g;
}

template <typename T>
TensorT<T> maxunpool2x2(const TensorT<T>& x, const std::vector<int64_t>& indices,
                        const std::vector<int>& out_shape) {
  require(x.data.size() == indices.size(), ErrorKind::ShapeMismatch,
          "maxunpool: indices do not match input");
  TensorT<T> out(out_shape);
  for (size_t i = 0; i < indices.size(); ++i) {
    require(indices[i] >= 0 && indices[i] < out.size(), ErrorKind::IndexOutOfRange,
            "unpool index outside output tensor");
    out.data[size_t(indices[i])] = x.data[i];
  }
  return out;
}

template <typename T>
TensorT<T> maxunpool2x2_backward(const TensorT<T>& grad_out, const std::vector<int64_t>& indices,
                                 const std::vector<int>& in_shape) {
  TensorT<T> g(in_shape);
  require(g.data.size() == indices.size(), ErrorKind::ShapeMismatch,
          "maxunpool_backward: indices do not match input shape");
  for (size_t i = 0; i < indices.size(); ++i) {
    require(indices[i] >= 0 && indices[i] < grad_out.size(), ErrorKind::IndexOutOfRange,
            "unpool index outside grad tensor");
    g.data[i] = grad_out.data[size_t(indices[i])];
  }
  return g;
}

template <typename T>
TensorT<T> concat_channels(const TensorT<T>& a, const TensorT<T>& b) {
  require(a.ndim() == 4 && b.ndim() == 4, ErrorKind::ShapeMismatch, "concat expects 4-d inputs");
  require(a.dim(0) == b.dim(0) && a.dim(2) == b.dim(2) && a.dim(3) == b.dim(3),
          ErrorKind::ShapeMismatch, "concat inputs must agree in N, H, W");
  const int n = a.dim(0), ca = a.dim(1), cb = b.dim(1), h = a.dim(2), wd = a.dim(3);
  TensorT<T> out({n, ca + cb, h, wd});
  const int64_t plane = int64_t(h) * wd;
  for (int ni = 0; ni < n; ++ni) {
    std::copy_n(&a.data[size_t(int64_t(ni) * ca * plane)], size_t(ca * plane),
                &out.data[size_t(int64_t(ni) * (ca + cb) * plane)]);
    std::copy_n(&b.data[size_t(int64_t(ni) * cb * plane)], size_t(cb * plane),
                &out.data[size_t((int64_t(ni) * (ca + cb) + ca) * plane)]);
  }
  return out;
}

template <typename T>
std::pair<TensorT<T>, TensorT<T>> split_channels(const TensorT<T>& grad, int ca, int cb) {
  require(grad.ndim() == 4 && grad.dim(1) == ca + cb, ErrorKind::ShapeMismatch,
          "split_channels: channel count mismatch");
  const int n = grad.dim(0), h = grad.dim(2), wd = grad.dim(3);
  TensorT<T> ga({n, ca, h, wd});
  TensorT<T> gb({n, cb, h, wd});
  const int64_t plane = int64_t(h) * wd;
  for (int ni = 0; ni < n; ++ni) {
    std::copy_n(&grad.data[size_t(int64_t(ni) * (ca + cb) * plane)], size_t(ca * plane),
                &ga.data[size_t(int64_t(ni) * ca * plane)]);
    std::copy_n(&grad.data[size_t((int64_t(ni) * (ca + cb) + ca) * plane)], size_t(cb * plane),
                &gb.data[size_t(int64_t(ni) * cb * plane)]);
  }
  return {std::move(ga), std::move(gb)};
}

template <typename T>
TensorT<T> add(const TensorT<T>& a, const TensorT<T>& b) {
  check_same_shape(a, b, "add");
  TensorT<T> out(a.shape);
  for (size_t i = 0; i < a.data.size(); ++i) out.data[i] = a.data[i] + b.data[i];
  return out;
}

#define LUNET_INSTANTIATE_OPS(T)                                                               \
  template TensorT<T> conv2d_forward<T>(const TensorT<T>&, const TensorT<T>&, const TensorT<T>&, \
                                        int, ConvAlgo);                                        \
  template ConvGrads<T> conv2d_backward<T>(const TensorT<T>&, const TensorT<T>&,               \
                                           const TensorT<T>&, int);                            \
  template TensorT<T> tconv2x2_forward<T>(const TensorT<T>&, const TensorT<T>&,                \
                                          const TensorT<T>&);                                  \
  template ConvGrads<T> tconv2x2_backward<T>(const TensorT<T>&, const TensorT<T>&,             \
                                             const TensorT<T>&);                               \
  template TensorT<T> batchnorm_forward_train<T>(const TensorT<T>&, const TensorT<T>&,         \
                                                 const TensorT<T>&, TensorT<T>*, TensorT<T>*,  \
                                                 T, T, BnCache<T>*);                           \
  template TensorT<T> batchnorm_forward_eval<T>(const TensorT<T>&, const TensorT<T>&,          \
                                                const TensorT<T>&, const TensorT<T>&,          \
                                                const TensorT<T>&, T);                         \
  template BnGrads<T> batchnorm_backward<T>(const TensorT<T>&, const BnCache<T>&,              \
                                            const TensorT<T>&);                                \
  template TensorT<T> relu_forward<T>(const TensorT<T>&);                                      \
  template TensorT<T> relu_backward<T>(const TensorT<T>&, const TensorT<T>&);                  \
  template TensorT<T> sigmoid_forward<T>(const TensorT<T>&);                                   \
  template TensorT<T> sigmoid_backward<T>(const TensorT<T>&, const TensorT<T>&);               \
  template PoolOut<T> maxpool2x2_forward<T>(const TensorT<T>&);                                \
  template TensorT<T> maxpool2x2_backward<T>(const TensorT<T>&, const std::vector<int64_t>&,   \
                                             const std::vector<int>&);                         \
  template TensorT<T> maxunpool2x2<T>(const TensorT<T>&, const std::vector<int64_t>&,          \
                                      const std::vector<int>&);                                \
  template TensorT<T> maxunpool2x2_backward<T>(const TensorT<T>&, const std::vector<int64_t>&, \
                                               const std::vector<int>&);                       \
  template TensorT<T> concat_channels<T>(const TensorT<T>&, const TensorT<T>&);                \
  template std::pair<TensorT<T>, TensorT<T>> split_channels<T>(const TensorT<T>&, int, int);   \
  template TensorT<T> add<T>(const TensorT<T>&, const TensorT<T>&);

LUNET_INSTANTIATE_OPS(float)
LUNET_INSTANTIATE_OPS(double)

#undef LUNET_INSTANTIATE_OPS

}  // namespace lunet::nn
