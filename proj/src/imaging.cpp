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

#include "lightlane/imaging.hpp"

#include <algorithm>
#include <cmath>

#include "lightlane/ops.hpp"

namespace lightlane {

std::pair<Image, ScaleTrace> pad_to_multiple(const Image& img, int multiple) {
  LL_CHECK(multiple >= 1, "pad_to_multiple: multiple must be >= 1");
  const int new_h = (img.height + multiple - 1) / multiple * multiple;
  const int new_w = (img.width + multiple - 1) / multiple * multiple;
  ScaleTrace trace;
  trace.original_height = img.height;
  trace.original_width = img.width;
  trace.pad_bottom = new_h - img.height;
  trace.pad_right = new_w - img.width;
  if (trace.pad_bottom == 0 && trace.pad_right == 0) return {img, trace};
  Image out(img.channels, new_h, new_w);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < new_h; ++y) {
      const int sy = ops::reflect_index(y, img.height);
      for (int x = 0; x < new_w; ++x)
        out.at(c, y, x) = img.at(c, sy, ops::reflect_index(x, img.width));
    }
  return {std::move(out), trace};
}

Image crop_to_trace(const Image& img, const ScaleTrace& trace) {
  LL_CHECK(img.height == trace.original_height + trace.pad_bottom &&
               img.width == trace.original_width + trace.pad_right,
           "crop_to_trace: image dims do not match trace");
  if (trace.pad_bottom == 0 && trace.pad_right == 0) return img;
  Image out(img.channels, trace.original_height, trace.original_width);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < out.height; ++y)
      for (int x = 0; x < out.width; ++x) out.at(c, y, x) = img.at(c, y, x);
  return out;
}

bool is_strictly_monotone_y(const Polyline& line) {
  if (line.points.size() < 2) return true;
  bool inc = true, dec = true;
  for (size_t i = 1; i < line.points.size(); ++i) {
    if (line.points[i].second <= line.points[i - 1].second) inc = false;
    if (line.points[i].second >= line.points[i - 1].second) dec = false;
  }
  return inc || dec;
}

namespace {

// Squared distance from point p to segment [a,b].
real point_segment_dist2(real px, real py, real ax, real ay, real bx, real by) {
  const real dx = bx - ax, dy = by - ay;
  const real len2 = dx * dx + dy * dy;
  real t = 0;
  if (len2 > 0) t = std::clamp(((px - ax) * dx + (py - ay) * dy) / len2, real(0), real(1));
  const real cx = ax + t * dx - px;
  const real cy = ay + t * dy - py;
  return cx * cx + cy * cy;
}

}  // namespace

Image rasterize_lane(const Polyline& line, real width, int canvas_h, int canvas_w) {
  LL_CHECK(width >= 1, "rasterize_lane: width must be >= 1");
  LL_CHECK(canvas_h >= 1 && canvas_w >= 1, "rasterize_lane: canvas dims must be >= 1");
  Image mask(1, canvas_h, canvas_w);
  if (line.points.size() < 2) return mask;
  const real r = width / 2;
  const real r2 = r * r;
  for (size_t i = 0; i + 1 < line.points.size(); ++i) {
    const auto [ax, ay] = line.points[i];
    const auto [bx, by] = line.points[i + 1];
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min(ax, bx) - r)) - 1);
    const int x1 = std::min(canvas_w - 1, static_cast<int>(std::ceil(std::max(ax, bx) + r)) + 1);
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min(ay, by) - r)) - 1);
    const int y1 = std::min(canvas_h - 1, static_cast<int>(std::ceil(std::max(ay, by) + r)) + 1);
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) {
        if (mask.at(0, y, x) != 0) continue;
        if (point_segment_dist2(static_cast<real>(x), static_cast<real>(y), ax, ay, bx, by) < r2)
          mask.at(0, y, x) = 1;
      }
  }
  return mask;
}

Tensor image_to_tensor(const Image& img) {
  Tensor t({1, img.channels, img.height, img.width});
  std::copy(img.data.begin(), img.data.end(), t.data());
  return t;
}

Image tensor_to_image(const Tensor& t, int batch_index) {
  LL_CHECK(t.ndim() == 4, "tensor_to_image: expects [N,C,H,W]");
  LL_CHECK(batch_index >= 0 && batch_index < t.size(0), "tensor_to_image: batch index");
  Image img(t.size(1), t.size(2), t.size(3));
  const real* src = t.data() + t.idx4(batch_index, 0, 0, 0);
  std::copy(src, src + img.data.size(), img.data.begin());
  return img;
}

Image resize_bilinear(const Image& img, int out_h, int out_w) {
  LL_CHECK(out_h >= 1 && out_w >= 1, "resize_bilinear: target dims must be >= 1");
  if (out_h == img.height && out_w == img.width) return img;
  Image out(img.channels, out_h, out_w);
  const real sy = static_cast<real>(img.height) / out_h;
  const real sx = static_cast<real>(img.width) / out_w;
  for (int y = 0; y < out_h; ++y) {
    const real fy = std::clamp((y + real(0.5)) * sy - real(0.5), real(0),
                               static_cast<real>(img.height - 1));
    const int y0 = static_cast<int>(std::floor(fy));
    const int y1 = std::min(y0 + 1, img.height - 1);
    const real wy = fy - y0;
    for (int x = 0; x < out_w; ++x) {
      const real fx = std::clamp((x + real(0.5)) * sx - real(0.5), real(0),
                                 static_cast<real>(img.width - 1));
      const int x0 = static_cast<int>(std::floor(fx));
      const int x1 = std::min(x0 + 1, img.width - 1);
      const real wx = fx - x0;
      for (int c = 0; c < img.channels; ++c) {
        const real top = img.at(c, y0, x0) * (1 - wx) + img.at(c, y0, x1) * wx;
        const real bot = img.at(c, y1, x0) * (1 - wx) + img.at(c, y1, x1) * wx;
        out.at(c, y, x) = top * (1 - wy) + bot * wy;
      }
    }
  }
  return out;
}

}  // namespace lightlane
