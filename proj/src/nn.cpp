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

#include "lightlane/nn.hpp"

#include <cmath>

#include "lightlane/random.hpp"

namespace lightlane::nn {

Tensor normal_init(const std::vector<int>& shape, real stddev, std::mt19937_64& rng) {
  Tensor t(shape);
  for (int64_t i = 0; i < t.numel(); ++i) t[i] = normal_real(rng, 0.0, stddev);
  return t;
}

Tensor he_init(const std::vector<int>& shape, std::mt19937_64& rng) {
  int64_t fan_in = 1;
  for (size_t i = 1; i < shape.size(); ++i) fan_in *= shape[i];
  const real stddev = std::sqrt(real(2) / static_cast<real>(fan_in));
  return normal_init(shape, stddev, rng);
}

namespace {
Tensor weight_init(const std::vector<int>& shape, real stddev, std::mt19937_64& rng) {
  return stddev > 0 ? normal_init(shape, stddev, rng) : he_init(shape, rng);
}
}  // namespace

void Conv2d::collect(const std::string& prefix, ParamList& out) const {
  out.push_back({prefix + ".w", w});
  if (b) out.push_back({prefix + ".b", b});
}

void Deconv2d::collect(const std::string& prefix, ParamList& out) const {
  out.push_back({prefix + ".w", w});
  if (b) out.push_back({prefix + ".b", b});
}

void InstanceNorm2d::collect(const std::string& prefix, ParamList& out) const {
  out.push_back({prefix + ".gamma", gamma});
  out.push_back({prefix + ".beta", beta});
}

void Linear::collect(const std::string& prefix, ParamList& out) const {
  out.push_back({prefix + ".w", w});
  if (b) out.push_back({prefix + ".b", b});
}

Conv2d make_conv(int ci, int co, int kh, int kw, int sh, int sw, bool bias, real stddev,
                 std::mt19937_64& rng) {
  Conv2d c;
  c.w = parameter(weight_init({co, ci, kh, kw}, stddev, rng));
  if (bias) c.b = parameter(Tensor({co}));
  c.sh = sh;
  c.sw = sw;
  return c;
}

Deconv2d make_deconv(int ci, int co, int kh, int kw, int sh, int sw, bool bias, real stddev,
                     std::mt19937_64& rng) {
  Deconv2d d;
  d.w = parameter(weight_init({ci, co, kh, kw}, stddev, rng));
  if (bias) d.b = parameter(Tensor({co}));
  d.sh = sh;
  d.sw = sw;
  return d;
}

InstanceNorm2d make_instance_norm(int c) {
  InstanceNorm2d n;
  n.gamma = parameter(Tensor({c}, real(1)));
  n.beta = parameter(Tensor({c}));
  return n;
}

Linear make_linear(int fi, int fo, bool bias, real stddev, std::mt19937_64& rng) {
  Linear l;
  l.w = parameter(weight_init({fo, fi}, stddev, rng));
  if (bias) l.b = parameter(Tensor({fo}));
  return l;
}

void set_requires_grad(const ParamList& params, bool v) {
  for (const auto& np : params) np.p->requires_grad = v;
}

void zero_grad(const ParamList& params) {
  for (const auto& np : params) np.p->grad = Tensor();
}

Adam::Adam(ParamList ps, real lr_, real b1, real b2)
    : params(std::move(ps)), lr(lr_), beta1(b1), beta2(b2) {
  m.reserve(params.size());
  v.reserve(params.size());
  for (const auto& np : params) {
    m.emplace_back(np.p->value.shape());
    v.emplace_back(np.p->value.shape());
  }
}

void Adam::step() {
  ++t;
  const real bc1 = real(1) - std::pow(beta1, static_cast<real>(t));
  const real bc2 = real(1) - std::pow(beta2, static_cast<real>(t));
  for (size_t i = 0; i < params.size(); ++i) {
    Node& p = *params[i].p;
    if (p.grad.empty()) continue;
    const real* g = p.grad.data();
    real* mi = m[i].data();
    real* vi = v[i].data();
    real* pv = p.value.data();
    const int64_t n = p.value.numel();
    for (int64_t j = 0; j < n; ++j) {
      mi[j] = beta1 * mi[j] + (real(1) - beta1) * g[j];
      vi[j] = beta2 * vi[j] + (real(1) - beta2) * g[j] * g[j];
      const real mh = mi[j] / bc1;
      const real vh = vi[j] / bc2;
      pv[j] -= lr * mh / (std::sqrt(vh) + eps);
    }
  }
}

Sgd::Sgd(ParamList ps, real momentum_) : params(std::move(ps)), momentum(momentum_) {
  vel.reserve(params.size());
  for (const auto& np : params) vel.emplace_back(np.p->value.shape());
}

void Sgd::step(real lr) {
  for (size_t i = 0; i < params.size(); ++i) {
    Node& p = *params[i].p;
    if (p.grad.empty()) continue;
    const real* g = p.grad.data();
    real* vi = vel[i].data();
    real* pv = p.value.data();
    const int64_t n = p.value.numel();
    for (int64_t j = 0; j < n; ++j) {
      vi[j] = momentum * vi[j] + g[j];
      pv[j] -= lr * vi[j];
    }
  }
}

}  // namespace lightlane::nn
