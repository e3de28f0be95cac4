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

// OpenMP kernels. Work is split over independent output elements only; each
// element is reduced in a fixed order by exactly one thread, so outputs are
// identical for any thread count.

#include <cmath>
#include <vector>

#include "lightlane/kernels.hpp"

namespace lightlane::kernels::omp {

void conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, int sh, int sw,
                    Tensor& out) {
  const int n_batch = x.size(0), ci = x.size(1), h = x.size(2), wd = x.size(3);
  const int co = w.size(0), kh = w.size(2), kw = w.size(3);
  const int oh = conv_out_dim(h, kh, sh), ow = conv_out_dim(wd, kw, sw);
  out = Tensor({n_batch, co, oh, ow});
  const real* __restrict xp = x.data();
  const real* __restrict wp = w.data();
  real* __restrict op = out.data();
  const int64_t xs_n = static_cast<int64_t>(ci) * h * wd, xs_c = static_cast<int64_t>(h) * wd;
  const int64_t ws_o = static_cast<int64_t>(ci) * kh * kw, ws_c = static_cast<int64_t>(kh) * kw;
  const int64_t os_n = static_cast<int64_t>(co) * oh * ow, os_c = static_cast<int64_t>(oh) * ow;
#pragma omp parallel for collapse(2) schedule(static)
  for (int n = 0; n < n_batch; ++n)
    for (int oc = 0; oc < co; ++oc) {
      for (int oy = 0; oy < oh; ++oy) {
        real* __restrict orow = op + os_n * n + os_c * oc + static_cast<int64_t>(oy) * ow;
        const real bias = b.empty() ? real(0) : b[oc];
        for (int ox = 0; ox < ow; ++ox) orow[ox] = bias;
        for (int ic = 0; ic < ci; ++ic)
          for (int ky = 0; ky < kh; ++ky) {
            const real* __restrict xrow =
                xp + xs_n * n + xs_c * ic + static_cast<int64_t>(oy * sh + ky) * wd;
            const real* __restrict wrow = wp + ws_o * oc + ws_c * ic + static_cast<int64_t>(ky) * kw;
            for (int kx = 0; kx < kw; ++kx) {
              const real wv = wrow[kx];
              if (sw == 1) {
                const real* __restrict xk = xrow + kx;
                for (int ox = 0; ox < ow; ++ox) orow[ox] += wv * xk[ox];
              } else {
                for (int ox = 0; ox < ow; ++ox) orow[ox] += wv * xrow[ox * sw + kx];
              }
            }
          }
      }
    }
}

void conv2d_backward_input(const Tensor& gout, const Tensor& w, int sh, int sw, int in_h,
                           int in_w, Tensor& gx) {
  const int n_batch = gout.size(0), co = gout.size(1), oh = gout.size(2), ow = gout.size(3);
  const int ci = w.size(1), kh = w.size(2), kw = w.size(3);
  gx = Tensor({n_batch, ci, in_h, in_w});
  const real* __restrict gp = gout.data();
  const real* __restrict wp = w.data();
  real* __restrict xp = gx.data();
  const int64_t gs_n = static_cast<int64_t>(co) * oh * ow, gs_c = static_cast<int64_t>(oh) * ow;
  const int64_t ws_o = static_cast<int64_t>(ci) * kh * kw, ws_c = static_cast<int64_t>(kh) * kw;
  const int64_t xs_n = static_cast<int64_t>(ci) * in_h * in_w,
                xs_c = static_cast<int64_t>(in_h) * in_w;
#pragma omp parallel for collapse(2) schedule(static)
  for (int n = 0; n < n_batch; ++n)
    for (int ic = 0; ic < ci; ++ic) {
      for (int iy = 0; iy < in_h; ++iy) {
        real* __restrict grow_x = xp + xs_n * n + xs_c * ic + static_cast<int64_t>(iy) * in_w;
        for (int oc = 0; oc < co; ++oc)
          for (int ky = 0; ky < kh; ++ky) {
            const int ny = iy - ky;
            if (ny < 0 || ny % sh != 0) continue;
            const int oy = ny / sh;
            if (oy >= oh) continue;
            const real* __restrict grow = gp + gs_n * n + gs_c * oc + static_cast<int64_t>(oy) * ow;
            const real* __restrict wrow = wp + ws_o * oc + ws_c * ic + static_cast<int64_t>(ky) * kw;
            for (int kx = 0; kx < kw; ++kx) {
              const real wv = wrow[kx];
              if (sw == 1) {
                real* __restrict dst = grow_x + kx;
                const int lim = std::min(ow, in_w - kx);
                for (int ox = 0; ox < lim; ++ox) dst[ox] += wv * grow[ox];
              } else {
                for (int ox = 0; ox < ow; ++ox) {
                  const int ix = ox * sw + kx;
                  if (ix < in_w) grow_x[ix] += wv * grow[ox];
                }
              }
            }
          }
      }
    }
}

void conv2d_backward_weight(const Tensor& x, const Tensor& gout, int sh, int sw, int kh, int kw,
                            Tensor& gw) {
  const int n_batch = x.size(0), ci = x.size(1), h = x.size(2), wd = x.size(3);
  const int co = gout.size(1), oh = gout.size(2), ow = gout.size(3);
  gw = Tensor({co, ci, kh, kw});
  const real* __restrict xp = x.data();
  const real* __restrict gp = gout.data();
  const int64_t xs_n = static_cast<int64_t>(ci) * h * wd, xs_c = static_cast<int64_t>(h) * wd;
  const int64_t gs_n = static_cast<int64_t>(co) * oh * ow, gs_c = static_cast<int64_t>(oh) * ow;
#pragma omp parallel for collapse(2) schedule(static)
  for (int oc = 0; oc < co; ++oc)
    for (int ic = 0; ic < ci; ++ic)
      for (int ky = 0; ky < kh; ++ky)
        for (int kx = 0; kx < kw; ++kx) {
          real acc = 0;
          for (int n = 0; n < n_batch; ++n)
            for (int oy = 0; oy < oh; ++oy) {
              const real* __restrict xrow =
                  xp + xs_n * n + xs_c * ic + static_cast<int64_t>(oy * sh + ky) * wd + kx;
              const real* __restrict grow =
                  gp + gs_n * n + gs_c * oc + static_cast<int64_t>(oy) * ow;
              if (sw == 1) {
                for (int ox = 0; ox < ow; ++ox) acc += xrow[ox] * grow[ox];
              } else {
                for (int ox = 0; ox < ow; ++ox) acc += xrow[ox * sw] * grow[ox];
              }
            }
          gw.at4(oc, ic, ky, kx) = acc;
        }
}

void deconv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, int sh, int sw,
                      Tensor& out) {
  const int n_batch = x.size(0), ci = x.size(1), h = x.size(2), wd = x.size(3);
  const int co = w.size(1), kh = w.size(2), kw = w.size(3);
  const int oh = deconv_out_dim(h, kh, sh), ow = deconv_out_dim(wd, kw, sw);
  out = Tensor({n_batch, co, oh, ow});
  const real* __restrict xp = x.data();
  const real* __restrict wp = w.data();
  real* __restrict op = out.data();
  const int64_t xs_n = static_cast<int64_t>(ci) * h * wd, xs_c = static_cast<int64_t>(h) * wd;
  const int64_t ws_i = static_cast<int64_t>(co) * kh * kw, ws_o = static_cast<int64_t>(kh) * kw;
  const int64_t os_n = static_cast<int64_t>(co) * oh * ow, os_c = static_cast<int64_t>(oh) * ow;
#pragma omp parallel for collapse(2) schedule(static)
  for (int n = 0; n < n_batch; ++n)
    for (int oc = 0; oc < co; ++oc) {
      for (int oy = 0; oy < oh; ++oy) {
        real* __restrict orow = op + os_n * n + os_c * oc + static_cast<int64_t>(oy) * ow;
        const real bias = b.empty() ? real(0) : b[oc];
        for (int ox = 0; ox < ow; ++ox) orow[ox] = bias;
        for (int ic = 0; ic < ci; ++ic)
          for (int ky = 0; ky < kh; ++ky) {
            const int ny = oy - ky;
            if (ny < 0 || ny % sh != 0) continue;
            const int iy = ny / sh;
            if (iy >= h) continue;
            const real* __restrict xrow = xp + xs_n * n + xs_c * ic + static_cast<int64_t>(iy) * wd;
            const real* __restrict wrow = wp + ws_i * ic + ws_o * oc + static_cast<int64_t>(ky) * kw;
            for (int kx = 0; kx < kw; ++kx) {
              const real wv = wrow[kx];
              for (int ix = 0; ix < wd; ++ix) orow[ix * sw + kx] += wv * xrow[ix];
            }
          }
      }
    }
}

void deconv2d_backward_input(const Tensor& gout, const Tensor& w, int sh, int sw, int in_h,
                             int in_w, Tensor& gx) {
  const int n_batch = gout.size(0), co = gout.size(1), oh = gout.size(2), ow = gout.size(3);
  const int ci = w.size(0), kh = w.size(2), kw = w.size(3);
  gx = Tensor({n_batch, ci, in_h, in_w});
  const real* __restrict gp = gout.data();
  const real* __restrict wp = w.data();
  real* __restrict xp = gx.data();
  const int64_t gs_n = static_cast<int64_t>(co) * oh * ow, gs_c = static_cast<int64_t>(oh) * ow;
  const int64_t ws_i = static_cast<int64_t>(co) * kh * kw, ws_o = static_cast<int64_t>(kh) * kw;
  const int64_t xs_n = static_cast<int64_t>(ci) * in_h * in_w,
                xs_c = static_cast<int64_t>(in_h) * in_w;
#pragma omp parallel for collapse(2) schedule(static)
  for (int n = 0; n < n_batch; ++n)
    for (int ic = 0; ic < ci; ++ic) {
      for (int iy = 0; iy < in_h; ++iy) {
        real* __restrict dst = xp + xs_n * n + xs_c * ic + static_cast<int64_t>(iy) * in_w;
        for (int oc = 0; oc < co; ++oc)
          for (int ky = 0; ky < kh; ++ky) {
            const real* __restrict grow =
                gp + gs_n * n + gs_c * oc + static_cast<int64_t>(iy * sh + ky) * ow;
            const real* __restrict wrow = wp + ws_i * ic + ws_o * oc + static_cast<int64_t>(ky) * kw;
            for (int kx = 0; kx < kw; ++kx) {
              const real wv = wrow[kx];
              for (int ix = 0; ix < in_w; ++ix) dst[ix] += wv * grow[ix * sw + kx];
            }
          }
      }
    }
}

void deconv2d_backward_weight(const Tensor& x, const Tensor& gout, int sh, int sw, Tensor& gw) {
  const int n_batch = x.size(0), ci = x.size(1), h = x.size(2), wd = x.size(3);
  const int co = gout.size(1);
  const int kh = gout.size(2) - (h - 1) * sh, kw = gout.size(3) - (wd - 1) * sw;
  const int ow = gout.size(3);
  gw = Tensor({ci, co, kh, kw});
  const real* __restrict xp = x.data();
  const real* __restrict gp = gout.data();
  const int64_t xs_n = static_cast<int64_t>(ci) * h * wd, xs_c = static_cast<int64_t>(h) * wd;
  const int64_t gs_n = static_cast<int64_t>(co) * gout.size(2) * ow,
                gs_c = static_cast<int64_t>(gout.size(2)) * ow;
#pragma omp parallel for collapse(2) schedule(static)
  for (int ic = 0; ic < ci; ++ic)
    for (int oc = 0; oc < co; ++oc)
      for (int ky = 0; ky < kh; ++ky)
        for (int kx = 0; kx < kw; ++kx) {
          real acc = 0;
          for (int n = 0; n < n_batch; ++n)
            for (int iy = 0; iy < h; ++iy) {
              const real* __restrict xrow = xp + xs_n * n + xs_c * ic + static_cast<int64_t>(iy) * wd;
              const real* __restrict grow =
                  gp + gs_n * n + gs_c * oc + static_cast<int64_t>(iy * sh + ky) * ow + kx;
              for (int ix = 0; ix < wd; ++ix) acc += xrow[ix] * grow[ix * sw];
            }
          gw.at4(ic, oc, ky, kx) = acc;
        }
}

void instance_norm_forward(const Tensor& x, const Tensor& gamma, const Tensor& beta, real eps,
                           Tensor& y, Tensor& mean, Tensor& inv_std) {
  const int n_batch = x.size(0), c = x.size(1), h = x.size(2), wd = x.size(3);
  const int64_t m = static_cast<int64_t>(h) * wd;
  y = Tensor(x.shape());
  mean = Tensor({n_batch, c});
  inv_std = Tensor({n_batch, c});
#pragma omp parallel for collapse(2) schedule(static)
  for (int n = 0; n < n_batch; ++n)
    for (int ch = 0; ch < c; ++ch) {
      const real* __restrict xs = x.data() + x.idx4(n, ch, 0, 0);
      real* __restrict ys = y.data() + y.idx4(n, ch, 0, 0);
      real mu = 0;
      for (int64_t i = 0; i < m; ++i) mu += xs[i];
      mu /= static_cast<real>(m);
      real var = 0;
      for (int64_t i = 0; i < m; ++i) {
        const real d = xs[i] - mu;
        var += d * d;
      }
      var /= static_cast<real>(m);
      const real istd = real(1) / std::sqrt(var + eps);
      mean[static_cast<int64_t>(n) * c + ch] = mu;
      inv_std[static_cast<int64_t>(n) * c + ch] = istd;
      const real g = gamma[ch], bt = beta[ch];
      for (int64_t i = 0; i < m; ++i) ys[i] = g * (xs[i] - mu) * istd + bt;
    }
}

void instance_norm_backward(const Tensor& x, const Tensor& gamma, const Tensor& mean,
                            const Tensor& inv_std, const Tensor& gy, Tensor& gx, Tensor& ggamma,
                            Tensor& gbeta) {
  const int n_batch = x.size(0), c = x.size(1), h = x.size(2), wd = x.size(3);
  const int64_t m64 = static_cast<int64_t>(h) * wd;
  const real m = static_cast<real>(m64);
  gx = Tensor(x.shape());
  ggamma = Tensor({c});
  gbeta = Tensor({c});
#pragma omp parallel for schedule(static)
  for (int ch = 0; ch < c; ++ch) {
    real gg = 0, gb = 0;
    for (int n = 0; n < n_batch; ++n) {
      const real mu = mean[static_cast<int64_t>(n) * c + ch];
      const real istd = inv_std[static_cast<int64_t>(n) * c + ch];
      const real* __restrict xs = x.data() + x.idx4(n, ch, 0, 0);
      const real* __restrict gys = gy.data() + gy.idx4(n, ch, 0, 0);
      real* __restrict gxs = gx.data() + gx.idx4(n, ch, 0, 0);
      real sum_gy = 0, sum_gy_xhat = 0;
      for (int64_t i = 0; i < m64; ++i) {
        const real xhat = (xs[i] - mu) * istd;
        sum_gy += gys[i];
        sum_gy_xhat += gys[i] * xhat;
      }
      gg += sum_gy_xhat;
      gb += sum_gy;
      const real k = gamma[ch] * istd / m;
      for (int64_t i = 0; i < m64; ++i) {
        const real xhat = (xs[i] - mu) * istd;
        gxs[i] = k * (m * gys[i] - sum_gy - xhat * sum_gy_xhat);
      }
    }
    ggamma[ch] = gg;
    gbeta[ch] = gb;
  }
}

}  // namespace lightlane::kernels::omp
