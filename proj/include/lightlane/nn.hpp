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

#include <random>
#include <string>
#include <vector>

#include "lightlane/autodiff.hpp"
#include "lightlane/ops.hpp"

namespace lightlane::nn {

struct NamedParam {
  std::string name;
  Var p;
};
using ParamList = std::vector<NamedParam>;

inline Var parameter(Tensor t) { return make_leaf(std::move(t), true); }

// Gaussian init, the convention for image-translation nets.
Tensor normal_init(const std::vector<int>& shape, real stddev, std::mt19937_64& rng);
// He/Kaiming init for ReLU nets; fan_in = product of all dims but the first.
Tensor he_init(const std::vector<int>& shape, std::mt19937_64& rng);

struct Conv2d {
  Var w;  // [Co,Ci,kh,kw]
  Var b;  // [Co] or null
  int sh = 1, sw = 1;
  Var operator()(const Var& x) const { return ops::conv2d(x, w, b, sh, sw); }
  void collect(const std::string& prefix, ParamList& out) const;
};

struct Deconv2d {
  Var w;  // [Ci,Co,kh,kw]
  Var b;  // [Co] or null
  int sh = 1, sw = 1;
  Var operator()(const Var& x) const { return ops::deconv2d(x, w, b, sh, sw); }
  void collect(const std::string& prefix, ParamList& out) const;
};

struct InstanceNorm2d {
  Var gamma, beta;  // [C]
  Var operator()(const Var& x) const { return ops::instance_norm(x, gamma, beta); }
  void collect(const std::string& prefix, ParamList& out) const;
};

struct Linear {
  Var w;  // [Fo,Fi]
  Var b;  // [Fo] or null
  Var operator()(const Var& x) const { return ops::linear(x, w, b); }
  void collect(const std::string& prefix, ParamList& out) const;
};

// stddev > 0 selects Gaussian init with that spread; stddev <= 0 selects He init.
Conv2d make_conv(int ci, int co, int kh, int kw, int sh, int sw, bool bias, real stddev,
                 std::mt19937_64& rng);
Deconv2d make_deconv(int ci, int co, int kh, int kw, int sh, int sw, bool bias, real stddev,
                     std::mt19937_64& rng);
InstanceNorm2d make_instance_norm(int c);
Linear make_linear(int fi, int fo, bool bias, real stddev, std::mt19937_64& rng);

void set_requires_grad(const ParamList& params, bool v);
void zero_grad(const ParamList& params);

// Adam. Parameters whose grad was never touched in the current step are
// skipped, matching the usual framework behavior.
struct Adam {
  ParamList params;
  real lr = 2e-4, beta1 = 0.5, beta2 = 0.999, eps = 1e-8;
  int64_t t = 0;
  std::vector<Tensor> m, v;

  Adam() = default;
  Adam(ParamList ps, real lr_, real b1, real b2);
  void step();
  void zero_grad() const { nn::zero_grad(params); }
};

// SGD with classical momentum; the per-step lr argument supports schedules.
struct Sgd {
  ParamList params;
  real momentum = 0.9;
  std::vector<Tensor> vel;

  Sgd() = default;
  Sgd(ParamList ps, real momentum_);
  void step(real lr);
  void zero_grad() const { nn::zero_grad(params); }
};

}  // namespace lightlane::nn
