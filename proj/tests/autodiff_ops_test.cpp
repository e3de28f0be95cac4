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

#include <cmath>

#include "doctest.h"
#include "lightlane/ops.hpp"
#include "lightlane/random.hpp"
#include "test_util.hpp"

using namespace lightlane;
using namespace lightlane::testutil;
namespace op = lightlane::ops;

namespace {

constexpr real kFdStep = 1e-4;
constexpr real kRelTol = 1e-5;

Var leaf_from(std::mt19937_64& rng, std::vector<int> shape, real lo = -1.0, real hi = 1.0) {
  return make_leaf(random_tensor(std::move(shape), rng, lo, hi), true);
}

}  // namespace

TEST_SUITE("autodiff") {

TEST_CASE("backward on a shared subgraph accumulates both paths") {
  auto x = make_leaf(Tensor({2}, 3.0), true);
  // y = mean(x + x); dy/dx_i = 2 * (1/2) = 1.
  auto y = op::mean_all(op::add(x, x));
  backward(y);
  CHECK(y->value.item() == doctest::Approx(6.0));
  REQUIRE(!x->grad.empty());
  CHECK(x->grad[0] == doctest::Approx(1.0));
  CHECK(x->grad[1] == doctest::Approx(1.0));
}

TEST_CASE("diamond graph fires each node once with full gradients") {
  auto rng = make_rng(21, 0);
  auto x = leaf_from(rng, {1, 2, 4, 4});
  auto build = [&] {
    auto a = op::relu(x);
    auto b = op::scale(a, 2.0);
    auto c = op::tanh_v(a);
    return op::mean_all(op::add(b, c));
  };
  auto res = check_gradients(build, {x}, 16, kFdStep, rng);
  CHECK(res.max_rel_err < kRelTol);
}

TEST_CASE("constants and detached values stop gradient flow") {
  auto x = make_leaf(Tensor({2}, 1.5), true);
  auto d = op::detached(op::scale(x, 3.0));
  auto y = op::mean_all(op::add(d, x));
  backward(y);
  REQUIRE(!x->grad.empty());
  // Only the direct path contributes.
  CHECK(x->grad[0] == doctest::Approx(0.5));
  CHECK(d->requires_grad == false);
}

TEST_CASE("gradients of elementwise and reduction ops") {
  auto rng = make_rng(22, 0);
  auto x = leaf_from(rng, {1, 3, 5, 4}, 0.1, 0.9);

  SUBCASE("relu away from the kink") {
    auto y = leaf_from(rng, {1, 3, 5, 4}, 0.2, 1.0);
    auto res = check_gradients([&] { return op::mean_all(op::relu(y)); }, {y}, 20, kFdStep, rng);
    CHECK(res.max_rel_err < kRelTol);
  }
  SUBCASE("leaky_relu") {
    auto y = leaf_from(rng, {1, 3, 5, 4}, -1.0, -0.2);
    auto res = check_gradients([&] { return op::mean_all(op::leaky_relu(y, 0.2)); }, {y}, 20,
                               kFdStep, rng);
    CHECK(res.max_rel_err < kRelTol);
  }
  SUBCASE("tanh") {
    auto res = check_gradients([&] { return op::mean_all(op::tanh_v(x)); }, {x}, 20, kFdStep, rng);
    CHECK(res.max_rel_err < kRelTol);
  }
  SUBCASE("sigmoid") {
    auto res =
        check_gradients([&] { return op::mean_all(op::sigmoid_v(x)); }, {x}, 20, kFdStep, rng);
    CHECK(res.max_rel_err < kRelTol);
  }
  SUBCASE("scale and add") {
    auto y = leaf_from(rng, {1, 3, 5, 4});
    auto res = check_gradients(
        [&] { return op::mean_all(op::add(op::scale(x, -1.7), op::scale(y, 0.3))); }, {x, y}, 20,
        kFdStep, rng);
    CHECK(res.max_rel_err < kRelTol);
  }
}

TEST_CASE("gradients of conv, deconv, pad, crop, fit") {
  auto rng = make_rng(23, 0);
  auto x = leaf_from(rng, {2, 2, 6, 7});
  auto w = leaf_from(rng, {3, 2, 3, 3}, -0.5, 0.5);
  auto b = leaf_from(rng, {3}, -0.2, 0.2);

  SUBCASE("conv2d") {
    auto res = check_gradients([&] { return op::mean_all(op::conv2d(x, w, b, 1, 1)); }, {x, w, b},
                               12, kFdStep, rng);
    CHECK(res.max_rel_err < kRelTol);
  }
  SUBCASE("conv2d strided") {
    auto res = check_gradients([&] { return op::mean_all(op::conv2d(x, w, b, 2, 2)); }, {x, w, b},
                               12, kFdStep, rng);
    CHECK(res.max_rel_err < kRelTol);
  }
  SUBCASE("deconv2d") {
    auto dw = leaf_from(rng, {2, 3, 4, 4}, -0.5, 0.5);
    auto db = leaf_from(rng, {3}, -0.2, 0.2);
    auto res = check_gradients([&] { return op::mean_all(op::deconv2d(x, dw, db, 2, 2)); },
                               {x, dw, db}, 12, kFdStep, rng);
    CHECK(res.max_rel_err < kRelTol);
  }
  SUBCASE("pad2d zero") {
    auto res = check_gradients(
        [&] { return op::mean_all(op::pad2d(x, 1, 2, 0, 3, ops::PadMode::kZero)); }, {x}, 20,
        kFdStep, rng);
    CHECK(res.max_rel_err < kRelTol);
  }
  SUBCASE("pad2d reflect") {
    auto res = check_gradients(
        [&] { return op::mean_all(op::pad2d(x, 2, 1, 3, 0, ops::PadMode::kReflect)); }, {x}, 20,
        kFdStep, rng);
    CHECK(res.max_rel_err < kRelTol);
  }
  SUBCASE("crop2d") {
    auto res = check_gradients([&] { return op::mean_all(op::crop2d(x, 1, 2, 4, 3)); }, {x}, 20,
                               kFdStep, rng);
    CHECK(res.max_rel_err < kRelTol);
  }
  SUBCASE("fit_hw grow and shrink") {
    auto res = check_gradients(
        [&] { return op::mean_all(op::fit_hw(op::fit_hw(x, 9, 5), 6, 7)); }, {x}, 20, kFdStep,
        rng);
    CHECK(res.max_rel_err < kRelTol);
  }
}

TEST_CASE("gradients of instance_norm") {
  auto rng = make_rng(24, 0);
  auto x = leaf_from(rng, {2, 3, 5, 5}, -2.0, 2.0);
  auto gamma = leaf_from(rng, {3}, 0.5, 1.5);
  auto beta = leaf_from(rng, {3}, -0.5, 0.5);
  auto res = check_gradients(
      [&] { return op::mean_all(op::tanh_v(op::instance_norm(x, gamma, beta))); },
      {x, gamma, beta}, 12, kFdStep, rng);
  CHECK(res.max_rel_err < 1e-4);
}

TEST_CASE("gradients of pooling, linear, and losses") {
  auto rng = make_rng(25, 0);

  SUBCASE("global_avg_pool + linear") {
    auto x = leaf_from(rng, {2, 3, 4, 6});
    auto w = leaf_from(rng, {2, 3}, -0.7, 0.7);
    auto b = leaf_from(rng, {2}, -0.2, 0.2);
    auto res = check_gradients(
        [&] { return op::mean_all(op::linear(op::global_avg_pool(x), w, b)); }, {x, w, b}, 16,
        kFdStep, rng);
    CHECK(res.max_rel_err < kRelTol);
  }
  SUBCASE("l1_loss at nonzero separation") {
    auto a = leaf_from(rng, {2, 3, 4, 4}, 1.0, 2.0);
    auto c = leaf_from(rng, {2, 3, 4, 4}, -2.0, -1.0);
    auto res = check_gradients([&] { return op::l1_loss(a, c); }, {a, c}, 16, kFdStep, rng);
    CHECK(res.max_rel_err < kRelTol);
  }
  SUBCASE("bce_loss_const") {
    auto p = leaf_from(rng, {1, 1, 4, 4}, 0.05, 0.95);
    auto res = check_gradients([&] { return op::bce_loss_const(p, 1.0, 1e-7); }, {p}, 16, kFdStep,
                               rng);
    CHECK(res.max_rel_err < kRelTol);
    res = check_gradients([&] { return op::bce_loss_const(p, 0.0, 1e-7); }, {p}, 16, kFdStep, rng);
    CHECK(res.max_rel_err < kRelTol);
  }
  SUBCASE("bce_loss against a target tensor") {
    auto p = leaf_from(rng, {2, 3}, 0.05, 0.95);
    Tensor t = random_tensor({2, 3}, rng, 0.0, 1.0);
    auto res = check_gradients([&] { return op::bce_loss(p, t, 1e-7); }, {p}, 6, kFdStep, rng);
    CHECK(res.max_rel_err < kRelTol);
  }
  SUBCASE("mse_loss_const") {
    auto p = leaf_from(rng, {2, 4});
    auto res = check_gradients([&] { return op::mse_loss_const(p, 1.0); }, {p}, 8, kFdStep, rng);
    CHECK(res.max_rel_err < kRelTol);
  }
  SUBCASE("softmax + nll") {
    auto logits = leaf_from(rng, {1, 4, 3, 3}, -1.5, 1.5);
    std::vector<int> targets(9);
    for (auto& t : targets) t = uniform_int(rng, 0, 3);
    std::vector<real> weights = {0.4, 1.0, 1.0, 1.0};
    auto res = check_gradients(
        [&] { return op::nll_from_probs(op::softmax_channels(logits), targets, weights, 1e-12); },
        {logits}, 20, kFdStep, rng);
    CHECK(res.max_rel_err < 1e-4);
  }
}

TEST_CASE("softmax_channels output sums to one over channels") {
  auto rng = make_rng(26, 0);
  auto x = leaf_from(rng, {2, 5, 3, 4}, -4.0, 4.0);
  auto p = op::softmax_channels(x);
  for (int n = 0; n < 2; ++n)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j) {
        real s = 0;
        for (int k = 0; k < 5; ++k) s += p->value.at4(n, k, i, j);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
      }
}

TEST_CASE("pad2d reflect mirrors interior content") {
  Tensor t({1, 1, 2, 2});
  t[0] = 1, t[1] = 2, t[2] = 3, t[3] = 4;
  auto x = make_leaf(t, false);
  auto y = op::pad2d(x, 0, 1, 0, 1, ops::PadMode::kReflect);
  // rows: [1 2 1; 3 4 3; 1 2 1] with reflection about the last row/col.
  REQUIRE(y->value.shape() == std::vector<int>({1, 1, 3, 3}));
  CHECK(y->value.at4(0, 0, 0, 2) == doctest::Approx(1.0));
  CHECK(y->value.at4(0, 0, 2, 0) == doctest::Approx(1.0));
  CHECK(y->value.at4(0, 0, 2, 2) == doctest::Approx(1.0));
  CHECK(y->value.at4(0, 0, 1, 2) == doctest::Approx(3.0));
  CHECK(y->value.at4(0, 0, 2, 1) == doctest::Approx(2.0));
}

}  // TEST_SUITE
