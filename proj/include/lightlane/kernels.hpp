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

#pragma once

#include "lightlane/tensor.hpp"

// Compute kernels behind the autodiff ops. Every kernel exists in two
// variants: a plain-loop serial reference and an OpenMP-parallel version.
// The parallel versions split work over independent output elements only,
// so results do not depend on the thread count or schedule.
namespace lightlane::kernels {

enum class Backend { kSerial, kParallel };

Backend backend();
void set_backend(Backend b);
// Reads LIGHTLANE_BACKEND=serial|parallel once at startup; parallel otherwise.
Backend default_backend_from_env();

// Valid (unpadded) cross-correlation.
//   x [N,Ci,H,W], w [Co,Ci,kh,kw], b [Co] or empty -> out [N,Co,Ho,Wo]
//   Ho = (H - kh)/sh + 1, Wo = (W - kw)/sw + 1
void conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, int sh, int sw,
                    Tensor& out);
void conv2d_backward_input(const Tensor& gout, const Tensor& w, int sh, int sw, int in_h,
                           int in_w, Tensor& gx);
void conv2d_backward_weight(const Tensor& x, const Tensor& gout, int sh, int sw, int kh,
                            int kw, Tensor& gw);

// Transposed convolution with no implicit cropping ("full" output).
//   x [N,Ci,H,W], w [Ci,Co,kh,kw], b [Co] or empty -> out [N,Co,(H-1)sh+kh,(W-1)sw+kw]
void deconv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, int sh, int sw,
                      Tensor& out);
void deconv2d_backward_input(const Tensor& gout, const Tensor& w, int sh, int sw, int in_h,
                             int in_w, Tensor& gx);
void deconv2d_backward_weight(const Tensor& x, const Tensor& gout, int sh, int sw, Tensor& gw);

// Per-sample, per-channel normalization over the spatial extent.
//   x [N,C,H,W], gamma/beta [C]; mean/inv_std [N,C] are saved for backward.
void instance_norm_forward(const Tensor& x, const Tensor& gamma, const Tensor& beta, real eps,
                           Tensor& y, Tensor& mean, Tensor& inv_std);
void instance_norm_backward(const Tensor& x, const Tensor& gamma, const Tensor& mean,
                            const Tensor& inv_std, const Tensor& gy, Tensor& gx, Tensor& ggamma,
                            Tensor& gbeta);

namespace serial {
void conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, int sh, int sw,
                    Tensor& out);
void conv2d_backward_input(const Tensor& gout, const Tensor& w, int sh, int sw, int in_h,
                           int in_w, Tensor& gx);
void conv2d_backward_weight(const Tensor& x, const Tensor& gout, int sh, int sw, int kh,
                            int kw, Tensor& gw);
void deconv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, int sh, int sw,
                      Tensor& out);
void deconv2d_backward_input(const Tensor& gout, const Tensor& w, int sh, int sw, int in_h,
                             int in_w, Tensor& gx);
void deconv2d_backward_weight(const Tensor& x, const Tensor& gout, int sh, int sw, Tensor& gw);
void instance_norm_forward(const Tensor& x, const Tensor& gamma, const Tensor& beta, real eps,
                           Tensor& y, Tensor& mean, Tensor& inv_std);
void instance_norm_backward(const Tensor& x, const Tensor& gamma, const Tensor& mean,
                            const Tensor& inv_std, const Tensor& gy, Tensor& gx, Tensor& ggamma,
                            Tensor& gbeta);
}  // namespace serial

namespace omp {
void conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, int sh, int sw,
                    Tensor& out);
void conv2d_backward_input(const Tensor& gout, const Tensor& w, int sh, int sw, int in_h,
                           int in_w, Tensor& gx);
void conv2d_backward_weight(const Tensor& x, const Tensor& gout, int sh, int sw, int kh,
                            int kw, Tensor& gw);
void deconv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, int sh, int sw,
                      Tensor& out);
void deconv2d_backward_input(const Tensor& gout, const Tensor& w, int sh, int sw, int in_h,
                             int in_w, Tensor& gx);
void deconv2d_backward_weight(const Tensor& x, const Tensor& gout, int sh, int sw, Tensor& gw);
void instance_norm_forward(const Tensor& x, const Tensor& gamma, const Tensor& beta, real eps,
                           Tensor& y, Tensor& mean, Tensor& inv_std);
void instance_norm_backward(const Tensor& x, const Tensor& gamma, const Tensor& mean,
                            const Tensor& inv_std, const Tensor& gy, Tensor& gx, Tensor& ggamma,
                            Tensor& gbeta);
}  // namespace omp

// Shape helpers shared by ops and tests.
inline int conv_out_dim(int in, int k, int s) { return (in - k) / s + 1; }
inline int deconv_out_dim(int in, int k, int s) { return (in - 1) * s + k; }

}  // namespace lightlane::kernels
