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

#include <cstdint>
#include <numeric>
#include <vector>

#include "lightlane/common.hpp"

namespace lightlane {

// Dense row-major tensor. Network activations use NCHW layout.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape) : shape_(std::move(shape)) {
    data_.assign(static_cast<size_t>(numel_of(shape_)), real(0));
  }
  Tensor(std::vector<int> shape, real fill) : shape_(std::move(shape)) {
    data_.assign(static_cast<size_t>(numel_of(shape_)), fill);
  }

  static Tensor zeros(std::vector<int> shape) { return Tensor(std::move(shape)); }
  static Tensor scalar(real v) { return Tensor({1}, v); }

  static int64_t numel_of(const std::vector<int>& shape) {
    int64_t n = 1;
    for (int d : shape) {
      LL_CHECK(d >= 0, "tensor dimension must be non-negative");
      n *= d;
    }
    return n;
  }

  bool empty() const { return data_.empty(); }
  int64_t numel() const { return static_cast<int64_t>(data_.size()); }
  int ndim() const { return static_cast<int>(shape_.size()); }
  int size(int i) const { return shape_.at(static_cast<size_t>(i)); }
  const std::vector<int>& shape() const { return shape_; }

  real* data() { return data_.data(); }
  const real* data() const { return data_.data(); }
  real& operator[](int64_t i) { return data_[static_cast<size_t>(i)]; }
  real operator[](int64_t i) const { return data_[static_cast<size_t>(i)]; }

  // NCHW addressing.
  int64_t idx4(int n, int c, int y, int x) const {
    return ((static_cast<int64_t>(n) * shape_[1] + c) * shape_[2] + y) * shape_[3] + x;
  }
  real& at4(int n, int c, int y, int x) { return data_[static_cast<size_t>(idx4(n, c, y, x))]; }
  real at4(int n, int c, int y, int x) const { return data_[static_cast<size_t>(idx4(n, c, y, x))]; }

  void fill(real v) { std::fill(data_.begin(), data_.end(), v); }
  void zero() { fill(real(0)); }

  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

  real item() const {
    LL_CHECK(numel() == 1, "item() requires a single-element tensor");
    return data_[0];
  }

 private:
  std::vector<int> shape_;
  std::vector<real> data_;
};

inline bool shapes_equal(const std::vector<int>& a, const std::vector<int>& b) { return a == b; }

}  // namespace lightlane
