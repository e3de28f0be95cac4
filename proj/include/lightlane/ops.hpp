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

#include <vector>

#include "lightlane/autodiff.hpp"

namespace lightlane::ops {

enum class PadMode { kZero, kReflect };

// Mirror index without edge repetition; clamps to replication for extents of
// one so degenerate 1x1 inputs still pad.
inline int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - m;
}

Var conv2d(const Var& x, const Var& w, const Var& b, int stride_h, int stride_w);
Var deconv2d(const Var& x, const Var& w, const Var& b, int stride_h, int stride_w);
Var pad2d(const Var& x, int top, int bottom, int left, int right, PadMode mode);
Var crop2d(const Var& x, int y0, int x0, int h, int w);
Var instance_norm(const Var& x, const Var& gamma, const Var& beta, real eps = 1e-5);

Var relu(const Var& x);
Var leaky_relu(const Var& x, real alpha);
Var tanh_v(const Var& x);
Var sigmoid_v(const Var& x);

Var add(const Var& a, const Var& b);
Var scale(const Var& x, real c);

// Centered crop or reflection pad to the target spatial dims (the scale
// information match step after an upsampling).
Var fit_hw(const Var& x, int target_h, int target_w);

Var global_avg_pool(const Var& x);               // [N,C,H,W] -> [N,C]
Var linear(const Var& x, const Var& w, const Var& b);  // [N,Fi] x [Fo,Fi] -> [N,Fo]

// Scalar losses (shape {1}).
Var l1_loss(const Var& a, const Var& b);
Var bce_loss_const(const Var& p, real target, real eps);
Var bce_loss(const Var& p, const Tensor& target, real eps);
Var mse_loss_const(const Var& p, real target);
Var mean_all(const Var& x);

Var softmax_channels(const Var& x);  // [N,K,H,W], softmax over K
// Mean over pixels of class_weight[t] * -log(max(p_t, eps)).
Var nll_from_probs(const Var& probs, const std::vector<int>& targets,
                   const std::vector<real>& class_weights, real eps);

inline Var constant(Tensor t) { return make_leaf(std::move(t), false); }
inline Var detached(const Var& v) { return make_leaf(v->value, false); }

}  // namespace lightlane::ops
