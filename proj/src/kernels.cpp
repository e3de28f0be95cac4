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

#include "lightlane/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace lightlane::kernels {

namespace {
std::atomic<Backend> g_backend{Backend::kParallel};
struct EnvInit {
  EnvInit() { g_backend.store(default_backend_from_env()); }
};
EnvInit g_env_init;
}  // namespace

Backend backend() { return g_backend.load(); }
void set_backend(Backend b) { g_backend.store(b); }

Backend default_backend_from_env() {
  const char* v = std::getenv("LIGHTLANE_BACKEND");
  if (v != nullptr && std::strcmp(v, "serial") == 0) return Backend::kSerial;
  return Backend::kParallel;
}

#define LL_DISPATCH(fn, ...)                       \
  do {                                             \
    if (backend() == Backend::kSerial)             \
      serial::fn(__VA_ARGS__);                     \
    else                                           \
      omp::fn(__VA_ARGS__);                        \
  } while (0)

void conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, int sh, int sw,
                    Tensor& out) {
  LL_CHECK(x.ndim() == 4 && w.ndim() == 4, "conv2d: expects 4-d tensors");
  LL_CHECK(x.size(1) == w.size(1), "conv2d: channel mismatch");
  LL_CHECK(x.size(2) >= w.size(2) && x.size(3) >= w.size(3),
           "conv2d: input smaller than kernel");
  LL_DISPATCH(conv2d_forward, x, w, b, sh, sw, out);
}
void conv2d_backward_input(const Tensor& gout, const Tensor& w, int sh, int sw, int in_h,
                           int in_w, Tensor& gx) {
  LL_DISPATCH(conv2d_backward_input, gout, w, sh, sw, in_h, in_w, gx);
}
void conv2d_backward_weight(const Tensor& x, const Tensor& gout, int sh, int sw, int kh,
                            int kw, Tensor& gw) {
  LL_DISPATCH(conv2d_backward_weight, x, gout, sh, sw, kh, kw, gw);
}
void deconv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, int sh, int sw,
                      Tensor& out) {
  LL_CHECK(x.ndim() == 4 && w.ndim() == 4, "deconv2d: expects 4-d tensors");
  LL_CHECK(x.size(1) == w.size(0), "deconv2d: channel mismatch");
  LL_DISPATCH(deconv2d_forward, x, w, b, sh, sw, out);
}
void deconv2d_backward_input(const Tensor& gout, const Tensor& w, int sh, int sw, int in_h,
                             int in_w, Tensor& gx) {
  LL_DISPATCH(deconv2d_backward_input, gout, w, sh, sw, in_h, in_w, gx);
}
void deconv2d_backward_weight(const Tensor& x, const Tensor& gout, int sh, int sw, Tensor& gw) {
  LL_DISPATCH(deconv2d_backward_weight, x, gout, sh, sw, gw);
}
void instance_norm_forward(const Tensor& x, const Tensor& gamma, const Tensor& beta, real eps,
                           Tensor& y, Tensor& mean, Tensor& inv_std) {
  LL_CHECK(x.ndim() == 4, "instance_norm: expects 4-d tensor");
  LL_CHECK(gamma.numel() == x.size(1) && beta.numel() == x.size(1),
           "instance_norm: gamma/beta must have one entry per channel");
  LL_DISPATCH(instance_norm_forward, x, gamma, beta, eps, y, mean, inv_std);
}
void instance_norm_backward(const Tensor& x, const Tensor& gamma, const Tensor& mean,
                            const Tensor& inv_std, const Tensor& gy, Tensor& gx, Tensor& ggamma,
                            Tensor& gbeta) {
  LL_DISPATCH(instance_norm_backward, x, gamma, mean, inv_std, gy, gx, ggamma, gbeta);
}

#undef LL_DISPATCH

}  // namespace lightlane::kernels
