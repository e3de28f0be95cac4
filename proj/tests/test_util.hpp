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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "lightlane/autodiff.hpp"
#include "lightlane/imaging.hpp"
#include "lightlane/random.hpp"
#include "lightlane/tensor.hpp"

namespace lightlane::testutil {

// Scratch directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    auto base = std::filesystem::temp_directory_path();
    for (int i = 0; i < 10000; ++i) {
      auto p = base / (tag + "." + std::to_string(::getpid()) + "." + std::to_string(i));
      std::error_code ec;
      if (std::filesystem::create_directory(p, ec)) {
        path_ = p.string();
        return;
      }
    }
    throw std::runtime_error("TempDir: could not create scratch directory");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::string& path() const { return path_; }
  std::string file(const std::string& name) const { return path_ + "/" + name; }

 private:
  std::string path_;
};

inline Tensor random_tensor(std::vector<int> shape, std::mt19937_64& rng, real lo = -1.0,
                            real hi = 1.0) {
  Tensor t(std::move(shape));
  for (int64_t i = 0; i < t.numel(); ++i) t[i] = uniform_real(rng, lo, hi);
  return t;
}

inline Image random_image(int c, int h, int w, std::mt19937_64& rng, real lo = -1.0,
                          real hi = 1.0) {
  Image img(c, h, w);
  for (auto& v : img.data) v = uniform_real(rng, lo, hi);
  return img;
}

inline real max_abs_diff(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) return std::numeric_limits<real>::infinity();
  real m = 0;
  for (int64_t i = 0; i < a.numel(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline bool bit_equal(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) return false;
  for (int64_t i = 0; i < a.numel(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

inline bool bit_equal(const Image& a, const Image& b) {
  return a.same_dims(b) && a.data == b.data;
}

inline real max_abs_diff_img(const Image& a, const Image& b) {
  if (!a.same_dims(b)) return std::numeric_limits<real>::infinity();
  real m = 0;
  for (size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

// Central-difference gradient check. `build` must construct the scalar loss
// graph from the current leaf values on every call. Samples `per_leaf`
// coordinates of each leaf, spread deterministically across the tensor.
struct GradCheckResult {
  real max_rel_err = 0;
  int checked = 0;
};

inline GradCheckResult check_gradients(const std::function<Var()>& build,
                                       const std::vector<Var>& leaves, int per_leaf,
                                       real fd_step, std::mt19937_64& rng) {
  Var root = build();
  for (const auto& leaf : leaves) leaf->grad = Tensor();
  backward(root);
  std::vector<Tensor> analytic;
  analytic.reserve(leaves.size());
  for (const auto& leaf : leaves) {
    analytic.push_back(leaf->grad.empty() ? Tensor(leaf->value.shape()) : leaf->grad);
  }

  GradCheckResult res;
  for (size_t li = 0; li < leaves.size(); ++li) {
    auto& leaf = leaves[li];
    int64_t n = leaf->value.numel();
    int take = static_cast<int>(std::min<int64_t>(per_leaf, n));
    for (int s = 0; s < take; ++s) {
      int64_t i = (take == static_cast<int>(n))
                      ? s
                      : static_cast<int64_t>(uniform_int(rng, 0, static_cast<int>(n) - 1));
      real saved = leaf->value[i];
      leaf->value[i] = saved + fd_step;
      real up = build()->value.item();
      leaf->value[i] = saved - fd_step;
      real dn = build()->value.item();
      leaf->value[i] = saved;
      real numeric = (up - dn) / (2 * fd_step);
      real exact = analytic[li][i];
      real denom = std::max({std::abs(numeric), std::abs(exact), real(1e-4)});
      res.max_rel_err = std::max(res.max_rel_err, std::abs(numeric - exact) / denom);
      ++res.checked;
    }
  }
  return res;
}

// Independent pixel-center rasterization oracle: a pixel is on iff its center
// lies strictly within width/2 of any polyline segment.
inline real point_segment_dist2(real px, real py, real x0, real y0, real x1, real y1) {
  real dx = x1 - x0, dy = y1 - y0;
  real len2 = dx * dx + dy * dy;
  real t = 0;
  if (len2 > 0) t = std::clamp(((px - x0) * dx + (py - y0) * dy) / len2, real(0), real(1));
  real cx = x0 + t * dx, cy = y0 + t * dy;
  return (px - cx) * (px - cx) + (py - cy) * (py - cy);
}

inline Image rasterize_oracle(const Polyline& line, real width, int h, int w) {
  Image mask(1, h, w);
  if (line.points.size() < 2) return mask;
  real r2 = (width / 2) * (width / 2);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      // Annotation coordinates address pixel centers directly.
      real px = x, py = y;
      bool on = false;
      for (size_t i = 0; i + 1 < line.points.size() && !on; ++i) {
        real d2 = point_segment_dist2(px, py, line.points[i].first, line.points[i].second,
                                      line.points[i + 1].first, line.points[i + 1].second);
        if (d2 < r2) on = true;
      }
      mask.at(0, y, x) = on ? 1.0 : 0.0;
    }
  }
  return mask;
}

inline real iou_oracle(const Image& a, const Image& b) {
  int64_t inter = 0, uni = 0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    bool pa = a.data[i] > 0.5, pb = b.data[i] > 0.5;
    inter += (pa && pb) ? 1 : 0;
    uni += (pa || pb) ? 1 : 0;
  }
  return uni == 0 ? 0.0 : static_cast<real>(inter) / static_cast<real>(uni);
}

// Exhaustive matching oracle: tries every injective pred->gt assignment and
// keeps the one maximizing (match count, summed IoU).
struct BruteMatch {
  int tp = 0;
  real iou_sum = 0;
};

inline void brute_match_rec(const std::vector<std::vector<real>>& iou, real thresh, size_t pi,
                            std::vector<bool>& used, int tp, real sum, BruteMatch& best) {
  if (pi == iou.size()) {
    if (tp > best.tp || (tp == best.tp && sum > best.iou_sum)) best = {tp, sum};
    return;
  }
  brute_match_rec(iou, thresh, pi + 1, used, tp, sum, best);
  for (size_t g = 0; g < used.size(); ++g) {
    if (used[g] || iou[pi][g] <= thresh) continue;
    used[g] = true;
    brute_match_rec(iou, thresh, pi + 1, used, tp + 1, sum + iou[pi][g], best);
    used[g] = false;
  }
}

inline BruteMatch brute_match(const std::vector<std::vector<real>>& iou, size_t n_gt,
                              real thresh) {
  BruteMatch best;
  std::vector<bool> used(n_gt, false);
  brute_match_rec(iou, thresh, 0, used, 0, 0.0, best);
  return best;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_file: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("write_file: cannot write " + path);
}

}  // namespace lightlane::testutil
