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

#include <benchmark/benchmark.h>

#include "lightlane/kernels.hpp"
#include "lightlane/random.hpp"

namespace {

using namespace lightlane;
namespace lk = lightlane::kernels;

Tensor random_tensor(std::vector<int> shape, uint64_t seed) {
  Tensor t(std::move(shape));
  auto rng = make_rng(seed, 0);
  for (int64_t i = 0; i < t.numel(); ++i) t[i] = normal_real(rng, 0.0, 1.0);
  return t;
}

template <void (*Conv)(const Tensor&, const Tensor&, const Tensor&, int, int, Tensor&)>
void bm_conv2d(benchmark::State& state) {
  const int hw = static_cast<int>(state.range(0));
  const Tensor x = random_tensor({1, 16, hw, hw}, 1);
  const Tensor w = random_tensor({16, 16, 3, 3}, 2);
  const Tensor b = random_tensor({16}, 3);
  Tensor out;
  for (auto _ : state) {
    Conv(x, w, b, 1, 1, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <void (*ConvBwdW)(const Tensor&, const Tensor&, int, int, int, int, Tensor&)>
void bm_conv2d_backward_weight(benchmark::State& state) {
  const int hw = static_cast<int>(state.range(0));
  const Tensor x = random_tensor({1, 16, hw, hw}, 1);
  const Tensor gout = random_tensor({1, 16, hw - 2, hw - 2}, 2);
  Tensor gw({16, 16, 3, 3});
  for (auto _ : state) {
    ConvBwdW(x, gout, 1, 1, 3, 3, gw);
    benchmark::DoNotOptimize(gw.data());
  }
}

template <void (*Deconv)(const Tensor&, const Tensor&, const Tensor&, int, int, Tensor&)>
void bm_deconv2d(benchmark::State& state) {
  const int hw = static_cast<int>(state.range(0));
  const Tensor x = random_tensor({1, 16, hw, hw}, 1);
  const Tensor w = random_tensor({16, 16, 3, 3}, 2);
  const Tensor b = random_tensor({16}, 3);
  Tensor out;
  for (auto _ : state) {
    Deconv(x, w, b, 2, 2, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <void (*Norm)(const Tensor&, const Tensor&, const Tensor&, real, Tensor&, Tensor&,
                       Tensor&)>
void bm_instance_norm(benchmark::State& state) {
  const int hw = static_cast<int>(state.range(0));
  const Tensor x = random_tensor({1, 32, hw, hw}, 1);
  const Tensor gamma = random_tensor({32}, 2);
  const Tensor beta = random_tensor({32}, 3);
  Tensor y, mean, inv_std;
  for (auto _ : state) {
    Norm(x, gamma, beta, 1e-5, y, mean, inv_std);
    benchmark::DoNotOptimize(y.data());
  }
}

BENCHMARK(bm_conv2d<lk::serial::conv2d_forward>)
    ->Name("conv2d_forward/serial")
    ->Arg(32)
    ->Arg(64)
    ->Arg(128)
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_conv2d<lk::omp::conv2d_forward>)
    ->Name("conv2d_forward/omp")
    ->Arg(32)
    ->Arg(64)
    ->Arg(128)
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_conv2d_backward_weight<lk::serial::conv2d_backward_weight>)
    ->Name("conv2d_backward_weight/serial")
    ->Arg(32)
    ->Arg(64)
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_conv2d_backward_weight<lk::omp::conv2d_backward_weight>)
    ->Name("conv2d_backward_weight/omp")
    ->Arg(32)
    ->Arg(64)
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_deconv2d<lk::serial::deconv2d_forward>)
    ->Name("deconv2d_forward/serial")
    ->Arg(16)
    ->Arg(32)
    ->Arg(64)
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_deconv2d<lk::omp::deconv2d_forward>)
    ->Name("deconv2d_forward/omp")
    ->Arg(16)
    ->Arg(32)
    ->Arg(64)
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_instance_norm<lk::serial::instance_norm_forward>)
    ->Name("instance_norm_forward/serial")
    ->Arg(64)
    ->Arg(128)
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_instance_norm<lk::omp::instance_norm_forward>)
    ->Name("instance_norm_forward/omp")
    ->Arg(64)
    ->Arg(128)
    ->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
