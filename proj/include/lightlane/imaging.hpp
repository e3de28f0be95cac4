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

#include <utility>
#include <vector>

#include "lightlane/tensor.hpp"

namespace lightlane {

// CHW image. Network-facing images hold values in [-1,1]; binary masks hold
// {0,1}.
struct Image {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<real> data;  // channels * height * width, CHW

  Image() = default;
  Image(int c, int h, int w) : channels(c), height(h), width(w) {
    LL_CHECK(c >= 1 && h >= 1 && w >= 1, "Image: dims must be >= 1");
    data.assign(static_cast<size_t>(c) * h * w, real(0));
  }

  real& at(int c, int y, int x) {
    return data[(static_cast<size_t>(c) * height + y) * width + x];
  }
  real at(int c, int y, int x) const {
    return data[(static_cast<size_t>(c) * height + y) * width + x];
  }
  bool same_dims(const Image& o) const {
    return channels == o.channels && height == o.height && width == o.width;
  }
};

// Resolution bookkeeping for the scale information match: outer padding from
// pad_to_multiple plus the per-stage dims recorded ahead of each downsampling.
struct ScaleTrace {
  int original_height = 0;
  int original_width = 0;
  int pad_bottom = 0;
  int pad_right = 0;
  std::vector<std::pair<int, int>> per_stage_dims;
};

// A single lane marking; y must be strictly monotone along the list.
struct Polyline {
  std::vector<std::pair<real, real>> points;  // (x, y)
};

// Pads bottom/right with reflected border content so dims become the smallest
// multiples of `multiple` that cover the input.
std::pair<Image, ScaleTrace> pad_to_multiple(const Image& img, int multiple);

// Inverse of pad_to_multiple: returns the top-left original region.
Image crop_to_trace(const Image& img, const ScaleTrace& trace);

// Binary mask; a pixel is set iff its center lies strictly within width/2 of
// any segment (round joins/caps). Polylines with fewer than 2 points give an
// empty mask.
Image rasterize_lane(const Polyline& line, real width, int canvas_h, int canvas_w);

bool is_strictly_monotone_y(const Polyline& line);

// Bilinear resampling with half-pixel centers (align_corners=false).
Image resize_bilinear(const Image& img, int out_h, int out_w);

// Tensor bridge: [C,H,W] image <-> [1,C,H,W] batch tensor.
Tensor image_to_tensor(const Image& img);
Image tensor_to_image(const Tensor& t, int batch_index = 0);

}  // namespace lightlane
