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

// Textbook reference kernels. Intentionally written as plain nested loops in
// index order so the parallel variants can be checked against them.

#include <cmath>

#include "lightlane/kernels.hpp"

namespace lightlane::kernels::serial {

void conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, int sh, int sw,
                    Tensor& out) {
  const int n_batch = x.size(0), ci = x.size(1), h = x.size(2), wd = x.size(3);
  const int co = w.size(0), kh = w.size(2), kw = w.size(3);
  const int oh = conv_out_dim(h, kh, sh), ow = conv_out_dim(wd, kw, sw);
  out = Tensor({n_batch, co, oh, ow});
  for (int n = 0; n < n_batch; ++n)
    for (int oc = 0; oc < co; ++oc)
      for (int oy = 0; oy < oh; ++oy)
        for (int ox = 0; ox < ow; ++ox) {
          real acc = b.empty() ? real(0) : b[oc];
          for (int ic = 0; ic < ci; ++ic)
            for (int ky = 0; ky < kh; ++ky)
              for (int kx = 0; kx < kw; ++kx)
                acc += x.at4(n, ic, oy * sh + ky, ox * sw + kx) * w.at4(oc, ic, ky, kx);
          out.at4(n, oc, oy, ox) = acc;
        }
}

void conv2d_backward_input(const Tensor& gout, const Tensor& w, int sh, int sw, int in_h,
                           int in_w, Tensor& gx) {
  const int n_batch = gout.size(0), co = gout.size(1), oh = gout.size(2), ow = gout.size(3);
  const int ci = w.size(1), kh = w.size(2), kw = w.size(3);
  gx = Tensor({n_batch, ci, in_h, in_w});
  for (int n = 0; n < n_batch; ++n)
    for (int ic = 0; ic < ci; ++ic)
      for (int iy = 0; iy < in_h; ++iy)
        for (int ix = 0; ix < in_w; ++ix) {
          real acc = 0;
          for (int oc = 0; oc < co; ++oc)
            for (int ky = 0; ky < kh; ++ky) {
              const int ny = iy - ky;
              if (ny < 0 || ny % sh != 0) continue;
              const int oy = ny / sh;
              if (oy >= oh) continue;
              for (int kx = 0; kx < kw; ++kx) {
                const int nx = ix - kx;
                if (nx < 0 || nx % sw != 0) continue;
                const int ox = nx / sw;
                if (ox >= ow) continue;
                acc += gout.at4(n, oc, oy, ox) * w.at4(oc, ic, ky, kx);
              }
            }
          gx.at4(n, ic, iy, ix) = acc;
        }
}

void conv2d_backward_weight(const Tensor& x, const Tensor& gout, int sh, int sw, int kh, int kw,
                            Tensor& gw) {
  const int n_batch = x.size(0), ci = x.size(1);
  const int co = gout.size(1), oh = gout.size(2), ow = gout.size(3);
  gw = Tensor({co, ci, kh, kw});
  for (int oc = 0; oc < co; ++oc)
    for (int ic = 0; ic < ci; ++ic)
      for (int ky = 0; ky < kh; ++ky)
        for (int kx = 0; kx < kw; ++kx) {
          real acc = 0;
          for (int n = 0; n < n_batch; ++n)
            for (int oy = 0; oy < oh; ++oy)
              for (int ox = 0; ox < ow; ++ox)
                acc += x.at4(n, ic, oy * sh + ky, ox * sw + kx) * gout.at4(n, oc, oy, ox);
          gw.at4(oc, ic, ky, kx) = acc;
        }
}

void deconv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, int sh, int sw,
                      Tensor& out) {
  const int n_batch = x.size(0), ci = x.size(1), h = x.size(2), wd = x.size(3);
  const int co = w.size(1), kh = w.size(2), kw = w.size(3);
  const int oh = deconv_out_dim(h, kh, sh), ow = deconv_out_dim(wd, kw, sw);
  out = Tensor({n_batch, co, oh, ow});
  for (int n = 0; n < n_batch; ++n)
    for (int oc = 0; oc < co; ++oc)
      for (int oy = 0; oy < oh; ++oy)
        for (int ox = 0; ox < ow; ++ox) {
          real acc = b.empty() ? real(0) : b[oc];
          for (int ic = 0; ic < ci; ++ic)
            for (int ky = 0; ky < kh; ++ky) {
              const int ny = oy - ky;
              if (ny < 0 || ny % sh != 0) continue;
              const int iy = ny / sh;
              if (iy >= h) continue;
              for (int kx = 0; kx < kw; ++kx) {
                const int nx = ox - kx;
                if (nx < 0 || nx % sw != 0) continue;
                const int ix = nx / sw;
                if (ix >= wd) continue;
                acc += x.at4(n, ic, iy, ix) * w.at4(ic, oc, ky, kx);
              }
            }
          out.at4(n, oc, oy, ox) = acc;
        }
}

void deconv2d_backward_input(const Tensor& gout, const Tensor& w, int sh, int sw, int in_h,
                             int in_w, Tensor& gx) {
  const int n_batch = gout.size(0), co = gout.size(1);
  const int ci = w.size(0), kh = w.size(2), kw = w.size(3);
  gx = Tensor({n_batch, ci, in_h, in_w});
  for (int n = 0; n < n_batch; ++n)
    for (int ic = 0; ic < ci; ++ic)
      for (int iy = 0; iy < in_h; ++iy)
        for (int ix = 0; ix < in_w; ++ix) {
          real acc = 0;
          for (int oc = 0; oc < co; ++oc)
            for (int ky = 0; ky < kh; ++ky)
              for (int kx = 0; kx < kw; ++kx)
                acc += gout.at4(n, oc, iy * sh + ky, ix * sw + kx) * w.at4(ic, oc, ky, kx);
          gx.at4(n, ic, iy, ix) = acc;
        }
}

void deconv2d_backward_weight(const Tensor& x, const Tensor& gout, int sh, int sw, Tensor& gw) {
  const int n_batch = x.size(0), ci = x.size(1), h = x.size(2), wd = x.size(3);
  const int co = gout.size(1);
  const int kh = gout.size(2) - (h - 1) * sh, kw = gout.size(3) - (wd - 1) * sw;
  gw = Tensor({ci, co, kh, kw});
  for (int ic = 0; ic < ci; ++ic)
    for (int oc = 0; oc < co; ++oc)
      for (int ky = 0; ky < kh; ++ky)
        for (int kx = 0; kx < kw; ++kx) {
          real acc = 0;
          for (int n = 0; n < n_batch; ++n)
            for (int iy = 0; iy < h; ++iy)
              for (int ix = 0; ix < wd; ++ix)
                acc += x.at4(n, ic, iy, ix) * gout.at4(n, oc, iy * sh + ky, ix * sw + kx);
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
  for (int n = 0; n < n_batch; ++n)
    for (int ch = 0; ch < c; ++ch) {
      real mu = 0;
      for (int yy = 0; yy < h; ++yy)
        for (int xx = 0; xx < wd; ++xx) mu += x.at4(n, ch, yy, xx);
      mu /= static_cast<real>(m);
      real var = 0;
      for (int yy = 0; yy < h; ++yy)
        for (int xx = 0; xx < wd; ++xx) {
          const real d = x.at4(n, ch, yy, xx) - mu;
          var += d * d;
        }
      var /= static_cast<real>(m);
      const real istd = real(1) / std::sqrt(var + eps);
      mean[static_cast<int64_t>(n) * c + ch] = mu;
      inv_std[static_cast<int64_t>(n) * c + ch] = istd;
      for (int yy = 0; yy < h; ++yy)
        for (int xx = 0; xx < wd; ++xx)
          y.at4(n, ch, yy, xx) = gamma[ch] * (x.at4(n, ch, yy, xx) - mu) * istd + beta[ch];
    }
}

void instance_norm_backward(const Tensor& x, const Tensor& gamma, const Tensor& mean,
                            const Tensor& inv_std, const Tensor& gy, Tensor& gx, Tensor& ggamma,
                            Tensor& gbeta) {
  const int n_batch = x.size(0), c = x.size(1), h = x.size(2), wd = x.size(3);
  const real m = static_cast<real>(static_cast<int64_t>(h) * wd);
  gx = Tensor(x.shape());
  ggamma = Tensor({c});
  gbeta = Tensor({c});
  for (int n = 0; n < n_batch; ++n)
    for (int ch = 0; ch < c; ++ch) {
      const real mu = mean[static_cast<int64_t>(n) * c + ch];
      const real istd = inv_std[static_cast<int64_t>(n) * c + ch];
      real sum_gy = 0, sum_gy_xhat = 0;
      for (int yy = 0; yy < h; ++yy)
        for (int xx = 0; xx < wd; ++xx) {
          const real xhat = (x.at4(n, ch, yy, xx) - mu) * istd;
          sum_gy += gy.at4(n, ch, yy, xx);
          sum_gy_xhat += gy.at4(n, ch, yy, xx) * xhat;
        }
      ggamma[ch] += sum_gy_xhat;
      gbeta[ch] += sum_gy;
      const real k = gamma[ch] * istd / m;
      for (int yy = 0; yy < h; ++yy)
        for (int xx = 0; xx < wd; ++xx) {
          const real xhat = (x.at4(n, ch, yy, xx) - mu) * istd;
          gx.at4(n, ch, yy, xx) =
              k * (m * gy.at4(n, ch, yy, xx) - sum_gy - xhat * sum_gy_xhat);
        }
    }
}

}  // namespace lightlane::kernels::serial
