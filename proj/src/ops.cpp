// Copyright (c) 2026 The LightLane Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lightlane/ops.hpp"

#include <algorithm>
#include <cmath>

#include "lightlane/kernels.hpp"

namespace lightlane::ops {

namespace {

void accumulate(Tensor& dst, const Tensor& src) {
  LL_CHECK(dst.numel() == src.numel(), "accumulate: gradient shape mismatch");
  real* d = dst.data();
  const real* s = src.data();
  const int64_t n = dst.numel();
  for (int64_t i = 0; i < n; ++i) d[i] += s[i];
}

}  // namespace

Var conv2d(const Var& x, const Var& w, const Var& b, int stride_h, int stride_w) {
  Tensor out;
  kernels::conv2d_forward(x->value, w->value, b ? b->value : Tensor(), stride_h, stride_w, out);
  std::vector<Var> parents = b ? std::vector<Var>{x, w, b} : std::vector<Var>{x, w};
  Var node = make_node(std::move(out), std::move(parents), "conv2d");
  if (!node->requires_grad) return node;
  Var xv = x, wv = w, bv = b;
  node->backward_fn = [xv, wv, bv, stride_h, stride_w](Node& self) {
    if (xv->requires_grad) {
      Tensor gx;
      kernels::conv2d_backward_input(self.grad, wv->value, stride_h, stride_w,
                                     xv->value.size(2), xv->value.size(3), gx);
      accumulate(xv->ensure_grad(), gx);
    }
    if (wv->requires_grad) {
      Tensor gw;
      kernels::conv2d_backward_weight(xv->value, self.grad, stride_h, stride_w,
                                      wv->value.size(2), wv->value.size(3), gw);
      accumulate(wv->ensure_grad(), gw);
    }
    if (bv && bv->requires_grad) {
      Tensor& gb = bv->ensure_grad();
      const int co = self.grad.size(1);
      for (int n = 0; n < self.grad.size(0); ++n)
        for (int c = 0; c < co; ++c) {
          real acc = 0;
          const real* g = self.grad.data() + self.grad.idx4(n, c, 0, 0);
          const int64_t m = static_cast<int64_t>(self.grad.size(2)) * self.grad.size(3);
          for (int64_t i = 0; i < m; ++i) acc += g[i];
          gb[c] += acc;
        }
    }
  };
  return node;
}

Var deconv2d(const Var& x, const Var& w, const Var& b, int stride_h, int stride_w) {
  Tensor out;
  kernels::deconv2d_forward(x->value, w->value, b ? b->value : Tensor(), stride_h, stride_w, out);
  std::vector<Var> parents = b ? std::vector<Var>{x, w, b} : std::vector<Var>{x, w};
  Var node = make_node(std::move(out), std::move(parents), "deconv2d");
  if (!node->requires_grad) return node;
  Var xv = x, wv = w, bv = b;
  node->backward_fn = [xv, wv, bv, stride_h, stride_w](Node& self) {
    if (xv->requires_grad) {
      Tensor gx;
      kernels::deconv2d_backward_input(self.grad, wv->value, stride_h, stride_w,
                                       xv->value.size(2), xv->value.size(3), gx);
      accumulate(xv->ensure_grad(), gx);
    }
    if (wv->requires_grad) {
      Tensor gw;
      kernels::deconv2d_backward_weight(xv->value, self.grad, stride_h, stride_w, gw);
      accumulate(wv->ensure_grad(), gw);
    }
    if (bv && bv->requires_grad) {
      Tensor& gb = bv->ensure_grad();
      for (int n = 0; n < self.grad.size(0); ++n)
        for (int c = 0; c < self.grad.size(1); ++c) {
          real acc = 0;
          const real* g = self.grad.data() + self.grad.idx4(n, c, 0, 0);
          const int64_t m = static_cast<int64_t>(self.grad.size(2)) * self.grad.size(3);
          for (int64_t i = 0; i < m; ++i) acc += g[i];
          gb[c] += acc;
        }
    }
  };
  return node;
}

Var pad2d(const Var& x, int top, int bottom, int left, int right, PadMode mode) {
  LL_CHECK(top >= 0 && bottom >= 0 && left >= 0 && right >= 0, "pad2d: negative pad");
  const Tensor& in = x->value;
  const int n_batch = in.size(0), c = in.size(1), h = in.size(2), w = in.size(3);
  const int oh = h + top + bottom, ow = w + left + right;
  Tensor out({n_batch, c, oh, ow});
  for (int n = 0; n < n_batch; ++n)
    for (int ch = 0; ch < c; ++ch)
      for (int oy = 0; oy < oh; ++oy) {
        const int iy = oy - top;
        for (int ox = 0; ox < ow; ++ox) {
          const int ix = ox - left;
          if (mode == PadMode::kZero) {
            out.at4(n, ch, oy, ox) = (iy >= 0 && iy < h && ix >= 0 && ix < w)
                                         ? in.at4(n, ch, iy, ix)
                                         : real(0);
          } else {
            out.at4(n, ch, oy, ox) = in.at4(n, ch, reflect_index(iy, h), reflect_index(ix, w));
          }
        }
      }
  Var node = make_node(std::move(out), {x}, "pad2d");
  if (!node->requires_grad) return node;
  Var xv = x;
  node->backward_fn = [xv, top, left, mode, h, w](Node& self) {
    Tensor& gx = xv->ensure_grad();
    const Tensor& g = self.grad;
    const int n_batch = g.size(0), c = g.size(1), oh = g.size(2), ow = g.size(3);
    for (int n = 0; n < n_batch; ++n)
      for (int ch = 0; ch < c; ++ch)
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy - top;
          for (int ox = 0; ox < ow; ++ox) {
            const int ix = ox - left;
            if (mode == PadMode::kZero) {
              if (iy >= 0 && iy < h && ix >= 0 && ix < w)
                gx.at4(n, ch, iy, ix) += g.at4(n, ch, oy, ox);
            } else {
              gx.at4(n, ch, reflect_index(iy, h), reflect_index(ix, w)) += g.at4(n, ch, oy, ox);
            }
          }
        }
  };
  return node;
}

Var crop2d(const Var& x, int y0, int x0, int h, int w) {
  const Tensor& in = x->value;
  LL_CHECK(y0 >= 0 && x0 >= 0 && y0 + h <= in.size(2) && x0 + w <= in.size(3),
           "crop2d: window out of bounds");
  const int n_batch = in.size(0), c = in.size(1);
  Tensor out({n_batch, c, h, w});
  for (int n = 0; n < n_batch; ++n)
    for (int ch = 0; ch < c; ++ch)
      for (int yy = 0; yy < h; ++yy)
        for (int xx = 0; xx < w; ++xx)
          out.at4(n, ch, yy, xx) = in.at4(n, ch, y0 + yy, x0 + xx);
  Var node = make_node(std::move(out), {x}, "crop2d");
  if (!node->requires_grad) return node;
  Var xv = x;
  node->backward_fn = [xv, y0, x0, h, w](Node& self) {
    Tensor& gx = xv->ensure_grad();
    for (int n = 0; n < self.grad.size(0); ++n)
      for (int ch = 0; ch < self.grad.size(1); ++ch)
        for (int yy = 0; yy < h; ++yy)
          for (int xx = 0; xx < w; ++xx)
            gx.at4(n, ch, y0 + yy, x0 + xx) += self.grad.at4(n, ch, yy, xx);
  };
  return node;
}

Var instance_norm(const Var& x, const Var& gamma, const Var& beta, real eps) {
  Tensor y, mean, inv_std;
  kernels::instance_norm_forward(x->value, gamma->value, beta->value, eps, y, mean, inv_std);
  Var node = make_node(std::move(y), {x, gamma, beta}, "instance_norm");
  if (!node->requires_grad) return node;
  Var xv = x, gv = gamma, bv = beta;
  auto saved_mean = std::make_shared<Tensor>(std::move(mean));
  auto saved_istd = std::make_shared<Tensor>(std::move(inv_std));
  node->backward_fn = [xv, gv, bv, saved_mean, saved_istd](Node& self) {
    Tensor gx, ggamma, gbeta;
    kernels::instance_norm_backward(xv->value, gv->value, *saved_mean, *saved_istd, self.grad,
                                    gx, ggamma, gbeta);
    if (xv->requires_grad) accumulate(xv->ensure_grad(), gx);
    if (gv->requires_grad) accumulate(gv->ensure_grad(), ggamma);
    if (bv->requires_grad) accumulate(bv->ensure_grad(), gbeta);
  };
  return node;
}

namespace {

template <typename Fwd, typename Bwd>
Var elementwise(const Var& x, const char* name, Fwd fwd, Bwd dfd) {
  Tensor out(x->value.shape());
  const real* in = x->value.data();
  real* o = out.data();
  const int64_t n = out.numel();
  for (int64_t i = 0; i < n; ++i) o[i] = fwd(in[i]);
  Var node = make_node(std::move(out), {x}, name);
  if (!node->requires_grad) return node;
  Var xv = x;
  node->backward_fn = [xv, dfd](Node& self) {
    Tensor& gx = xv->ensure_grad();
    const real* in = xv->value.data();
    const real* y = self.value.data();
    const real* g = self.grad.data();
    real* d = gx.data();
    const int64_t n = gx.numel();
    for (int64_t i = 0; i < n; ++i) d[i] += dfd(in[i], y[i]) * g[i];
  };
  return node;
}

}  // namespace

Var relu(const Var& x) {
  return elementwise(
      x, "relu", [](real v) { return v > 0 ? v : real(0); },
      [](real v, real) { return v > 0 ? real(1) : real(0); });
}

Var leaky_relu(const Var& x, real alpha) {
  return elementwise(
      x, "leaky_relu", [alpha](real v) { return v > 0 ? v : alpha * v; },
      [alpha](real v, real) { return v > 0 ? real(1) : alpha; });
}

Var tanh_v(const Var& x) {
  return elementwise(
      x, "tanh", [](real v) { return std::tanh(v); },
      [](real, real y) { return real(1) - y * y; });
}

Var sigmoid_v(const Var& x) {
  return elementwise(
      x, "sigmoid",
      [](real v) {
        if (v >= 0) return real(1) / (real(1) + std::exp(-v));
        const real e = std::exp(v);
        return e / (real(1) + e);
      },
      [](real, real y) { return y * (real(1) - y); });
}

Var add(const Var& a, const Var& b) {
  LL_CHECK(a->value.same_shape(b->value), "add: shape mismatch");
  Tensor out(a->value.shape());
  const real* pa = a->value.data();
  const real* pb = b->value.data();
  real* o = out.data();
  const int64_t n = out.numel();
  for (int64_t i = 0; i < n; ++i) o[i] = pa[i] + pb[i];
  Var node = make_node(std::move(out), {a, b}, "add");
  if (!node->requires_grad) return node;
  Var av = a, bv = b;
  node->backward_fn = [av, bv](Node& self) {
    if (av->requires_grad) accumulate(av->ensure_grad(), self.grad);
    if (bv->requires_grad) accumulate(bv->ensure_grad(), self.grad);
  };
  return node;
}

Var scale(const Var& x, real c) {
  Tensor out(x->value.shape());
  const real* in = x->value.data();
  real* o = out.data();
  const int64_t n = out.numel();
  for (int64_t i = 0; i < n; ++i) o[i] = c * in[i];
  Var node = make_node(std::move(out), {x}, "scale");
  if (!node->requires_grad) return node;
  Var xv = x;
  node->backward_fn = [xv, c](Node& self) {
    Tensor& gx = xv->ensure_grad();
    const real* g = self.grad.data();
    real* d = gx.data();
    for (int64_t i = 0; i < gx.numel(); ++i) d[i] += c * g[i];
  };
  return node;
}

Var fit_hw(const Var& x, int target_h, int target_w) {
  LL_CHECK(target_h >= 1 && target_w >= 1, "fit_hw: target dims must be >= 1");
  int h = x->value.size(2), w = x->value.size(3);
  Var y = x;
  if (h > target_h || w > target_w) {
    const int ch = std::min(h, target_h), cw = std::min(w, target_w);
    y = crop2d(y, (h - ch) / 2, (w - cw) / 2, ch, cw);
    h = ch;
    w = cw;
  }
  if (h < target_h || w < target_w) {
    const int ph = target_h - h, pw = target_w - w;
    y = pad2d(y, ph / 2, ph - ph / 2, pw / 2, pw - pw / 2, PadMode::kReflect);
  }
  return y;
}

Var global_avg_pool(const Var& x) {
  const Tensor& in = x->value;
  const int n_batch = in.size(0), c = in.size(1);
  const int64_t m = static_cast<int64_t>(in.size(2)) * in.size(3);
  Tensor out({n_batch, c});
  for (int n = 0; n < n_batch; ++n)
    for (int ch = 0; ch < c; ++ch) {
      const real* p = in.data() + in.idx4(n, ch, 0, 0);
      real acc = 0;
      for (int64_t i = 0; i < m; ++i) acc += p[i];
      out[static_cast<int64_t>(n) * c + ch] = acc / static_cast<real>(m);
    }
  Var node = make_node(std::move(out), {x}, "gap");
  if (!node->requires_grad) return node;
  Var xv = x;
  node->backward_fn = [xv, m](Node& self) {
    Tensor& gx = xv->ensure_grad();
    const int c = self.grad.size(1);
    for (int n = 0; n < self.grad.size(0); ++n)
      for (int ch = 0; ch < c; ++ch) {
        const real g = self.grad[static_cast<int64_t>(n) * c + ch] / static_cast<real>(m);
        real* d = gx.data() + gx.idx4(n, ch, 0, 0);
        for (int64_t i = 0; i < m; ++i) d[i] += g;
      }
  };
  return node;
}

Var linear(const Var& x, const Var& w, const Var& b) {
  const Tensor& in = x->value;
  const Tensor& wt = w->value;
  LL_CHECK(in.ndim() == 2 && wt.ndim() == 2 && in.size(1) == wt.size(1),
           "linear: shape mismatch");
  const int n_batch = in.size(0), fi = in.size(1), fo = wt.size(0);
  Tensor out({n_batch, fo});
  for (int n = 0; n < n_batch; ++n)
    for (int o = 0; o < fo; ++o) {
      real acc = b ? b->value[o] : real(0);
      const real* xr = in.data() + static_cast<int64_t>(n) * fi;
      const real* wr = wt.data() + static_cast<int64_t>(o) * fi;
      for (int i = 0; i < fi; ++i) acc += xr[i] * wr[i];
      out[static_cast<int64_t>(n) * fo + o] = acc;
    }
  std::vector<Var> parents = b ? std::vector<Var>{x, w, b} : std::vector<Var>{x, w};
  Var node = make_node(std::move(out), std::move(parents), "linear");
  if (!node->requires_grad) return node;
  Var xv = x, wv = w, bv = b;
  node->backward_fn = [xv, wv, bv, fi, fo](Node& self) {
    const int n_batch = self.grad.size(0);
    const real* g = self.grad.data();
    if (xv->requires_grad) {
      Tensor& gx = xv->ensure_grad();
      for (int n = 0; n < n_batch; ++n)
        for (int i = 0; i < fi; ++i) {
          real acc = 0;
          for (int o = 0; o < fo; ++o)
            acc += g[static_cast<int64_t>(n) * fo + o] * wv->value[static_cast<int64_t>(o) * fi + i];
          gx[static_cast<int64_t>(n) * fi + i] += acc;
        }
    }
    if (wv->requires_grad) {
      Tensor& gw = wv->ensure_grad();
      for (int o = 0; o < fo; ++o)
        for (int i = 0; i < fi; ++i) {
          real acc = 0;
          for (int n = 0; n < n_batch; ++n)
            acc += g[static_cast<int64_t>(n) * fo + o] * xv->value[static_cast<int64_t>(n) * fi + i];
          gw[static_cast<int64_t>(o) * fi + i] += acc;
        }
    }
    if (bv && bv->requires_grad) {
      Tensor& gb = bv->ensure_grad();
      for (int o = 0; o < fo; ++o) {
        real acc = 0;
        for (int n = 0; n < n_batch; ++n) acc += g[static_cast<int64_t>(n) * fo + o];
        gb[o] += acc;
      }
    }
  };
  return node;
}

Var l1_loss(const Var& a, const Var& b) {
  LL_CHECK(a->value.same_shape(b->value), "l1_loss: shape mismatch");
  const int64_t n = a->value.numel();
  real acc = 0;
  const real* pa = a->value.data();
  const real* pb = b->value.data();
  for (int64_t i = 0; i < n; ++i) acc += std::abs(pa[i] - pb[i]);
  Var node = make_node(Tensor::scalar(acc / static_cast<real>(n)), {a, b}, "l1_loss");
  if (!node->requires_grad) return node;
  Var av = a, bv = b;
  node->backward_fn = [av, bv, n](Node& self) {
    const real g = self.grad[0] / static_cast<real>(n);
    const real* pa = av->value.data();
    const real* pb = bv->value.data();
    real* ga = av->requires_grad ? av->ensure_grad().data() : nullptr;
    real* gb = bv->requires_grad ? bv->ensure_grad().data() : nullptr;
    for (int64_t i = 0; i < n; ++i) {
      const real d = pa[i] - pb[i];
      const real s = d > 0 ? g : (d < 0 ? -g : real(0));
      if (ga) ga[i] += s;
      if (gb) gb[i] -= s;
    }
  };
  return node;
}

namespace {

Var bce_impl(const Var& p, const Tensor* target, real const_target, real eps) {
  const int64_t n = p->value.numel();
  const real* pp = p->value.data();
  real acc = 0;
  for (int64_t i = 0; i < n; ++i) {
    const real ph = std::clamp(pp[i], eps, real(1) - eps);
    const real t = target ? (*target)[i] : const_target;
    acc += -(t * std::log(ph) + (real(1) - t) * std::log(real(1) - ph));
  }
  Var node = make_node(Tensor::scalar(acc / static_cast<real>(n)), {p}, "bce");
  if (!node->requires_grad) return node;
  Var pv = p;
  Tensor tgt_copy = target ? *target : Tensor();
  node->backward_fn = [pv, tgt_copy, const_target, eps, n](Node& self) {
    const real g = self.grad[0] / static_cast<real>(n);
    Tensor& gx = pv->ensure_grad();
    const real* pp = pv->value.data();
    for (int64_t i = 0; i < n; ++i) {
      if (pp[i] <= eps || pp[i] >= real(1) - eps) continue;  // clamped flat region
      const real t = tgt_copy.empty() ? const_target : tgt_copy[i];
      gx[i] += g * (pp[i] - t) / (pp[i] * (real(1) - pp[i]));
    }
  };
  return node;
}

}  // namespace

Var bce_loss_const(const Var& p, real target, real eps) { return bce_impl(p, nullptr, target, eps); }

Var bce_loss(const Var& p, const Tensor& target, real eps) {
  LL_CHECK(p->value.numel() == target.numel(), "bce_loss: target size mismatch");
  return bce_impl(p, &target, 0, eps);
}

Var mse_loss_const(const Var& p, real target) {
  const int64_t n = p->value.numel();
  const real* pp = p->value.data();
  real acc = 0;
  for (int64_t i = 0; i < n; ++i) {
    const real d = pp[i] - target;
    acc += d * d;
  }
  Var node = make_node(Tensor::scalar(acc / static_cast<real>(n)), {p}, "mse_const");
  if (!node->requires_grad) return node;
  Var pv = p;
  node->backward_fn = [pv, target, n](Node& self) {
    const real g = self.grad[0] / static_cast<real>(n);
    Tensor& gx = pv->ensure_grad();
    const real* pp = pv->value.data();
    for (int64_t i = 0; i < n; ++i) gx[i] += g * 2 * (pp[i] - target);
  };
  return node;
}

Var mean_all(const Var& x) {
  const int64_t n = x->value.numel();
  real acc = 0;
  const real* p = x->value.data();
  for (int64_t i = 0; i < n; ++i) acc += p[i];
  Var node = make_node(Tensor::scalar(acc / static_cast<real>(n)), {x}, "mean");
  if (!node->requires_grad) return node;
  Var xv = x;
  node->backward_fn = [xv, n](Node& self) {
    const real g = self.grad[0] / static_cast<real>(n);
    Tensor& gx = xv->ensure_grad();
    for (int64_t i = 0; i < n; ++i) gx[i] += g;
  };
  return node;
}

Var softmax_channels(const Var& x) {
  const Tensor& in = x->value;
  LL_CHECK(in.ndim() == 4, "softmax_channels: expects [N,K,H,W]");
  const int n_batch = in.size(0), k = in.size(1), h = in.size(2), w = in.size(3);
  Tensor out(in.shape());
  for (int n = 0; n < n_batch; ++n)
    for (int yy = 0; yy < h; ++yy)
      for (int xx = 0; xx < w; ++xx) {
        real mx = in.at4(n, 0, yy, xx);
        for (int c = 1; c < k; ++c) mx = std::max(mx, in.at4(n, c, yy, xx));
        real z = 0;
        for (int c = 0; c < k; ++c) {
          const real e = std::exp(in.at4(n, c, yy, xx) - mx);
          out.at4(n, c, yy, xx) = e;
          z += e;
        }
        for (int c = 0; c < k; ++c) out.at4(n, c, yy, xx) /= z;
      }
  Var node = make_node(std::move(out), {x}, "softmax_c");
  if (!node->requires_grad) return node;
  Var xv = x;
  node->backward_fn = [xv, n_batch, k, h, w](Node& self) {
    Tensor& gx = xv->ensure_grad();
    for (int n = 0; n < n_batch; ++n)
      for (int yy = 0; yy < h; ++yy)
        for (int xx = 0; xx < w; ++xx) {
          real dot = 0;
          for (int c = 0; c < k; ++c)
            dot += self.grad.at4(n, c, yy, xx) * self.value.at4(n, c, yy, xx);
          for (int c = 0; c < k; ++c) {
            const real p = self.value.at4(n, c, yy, xx);
            gx.at4(n, c, yy, xx) += p * (self.grad.at4(n, c, yy, xx) - dot);
          }
        }
  };
  return node;
}

Var nll_from_probs(const Var& probs, const std::vector<int>& targets,
                   const std::vector<real>& class_weights, real eps) {
  const Tensor& p = probs->value;
  LL_CHECK(p.ndim() == 4, "nll_from_probs: expects [N,K,H,W]");
  const int n_batch = p.size(0), k = p.size(1), h = p.size(2), w = p.size(3);
  const int64_t npix = static_cast<int64_t>(n_batch) * h * w;
  LL_CHECK(static_cast<int64_t>(targets.size()) == npix, "nll_from_probs: target count mismatch");
  LL_CHECK(static_cast<int>(class_weights.size()) == k, "nll_from_probs: weight count mismatch");
  real acc = 0;
  int64_t ti = 0;
  for (int n = 0; n < n_batch; ++n)
    for (int yy = 0; yy < h; ++yy)
      for (int xx = 0; xx < w; ++xx, ++ti) {
        const int t = targets[static_cast<size_t>(ti)];
        LL_CHECK(t >= 0 && t < k, "nll_from_probs: class index out of range");
        acc += class_weights[static_cast<size_t>(t)] * -std::log(std::max(p.at4(n, t, yy, xx), eps));
      }
  Var node = make_node(Tensor::scalar(acc / static_cast<real>(npix)), {probs}, "nll");
  if (!node->requires_grad) return node;
  Var pv = probs;
  auto tcopy = std::make_shared<std::vector<int>>(targets);
  auto wcopy = std::make_shared<std::vector<real>>(class_weights);
  node->backward_fn = [pv, tcopy, wcopy, n_batch, h, w, npix, eps](Node& self) {
    const real g = self.grad[0] / static_cast<real>(npix);
    Tensor& gx = pv->ensure_grad();
    int64_t ti = 0;
    for (int n = 0; n < n_batch; ++n)
      for (int yy = 0; yy < h; ++yy)
        for (int xx = 0; xx < w; ++xx, ++ti) {
          const int t = (*tcopy)[static_cast<size_t>(ti)];
          const real pt = pv->value.at4(n, t, yy, xx);
          if (pt <= eps) continue;  // clamped flat region
          gx.at4(n, t, yy, xx) += g * -(*wcopy)[static_cast<size_t>(t)] / pt;
        }
  };
  return node;
}

}  // namespace lightlane::ops
