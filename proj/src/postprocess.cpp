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

#include "lightlane/postprocess.hpp"

#include <algorithm>

#include "lightlane/datasets.hpp"

namespace lightlane {

DecodedLanes decode_lanes(const DetectorOutput& out, real exist_thresh, int row_stride,
                          real row_prob_floor) {
  LL_CHECK(out.prob_maps.ndim() == 4 && out.prob_maps.size(0) == 1,
           "decode_lanes: prob_maps must be [1,L+1,H,W]");
  LL_CHECK(row_stride >= 1, "decode_lanes: row_stride must be >= 1");
  const int lanes = out.prob_maps.size(1) - 1;
  LL_CHECK(out.existence.numel() == lanes, "decode_lanes: existence size mismatch");
  const int h = out.prob_maps.size(2), w = out.prob_maps.size(3);

  DecodedLanes dec;
  dec.confidences.resize(static_cast<size_t>(lanes));
  for (int l = 0; l < lanes; ++l) dec.confidences[static_cast<size_t>(l)] = out.existence[l];

  for (int l = 0; l < lanes; ++l) {
    if (!(dec.confidences[static_cast<size_t>(l)] > exist_thresh)) continue;
    Polyline line;
    for (int y = h - 1; y >= 0; y -= row_stride) {
      int best_x = 0;
      real best_p = out.prob_maps.at4(0, l + 1, y, 0);
      for (int x = 1; x < w; ++x) {
        const real p = out.prob_maps.at4(0, l + 1, y, x);
        if (p > best_p) {
          best_p = p;
          best_x = x;
        }
      }
      if (best_p >= row_prob_floor)
        line.points.emplace_back(static_cast<real>(best_x), static_cast<real>(y));
    }
    if (line.points.size() < 2) continue;
    std::reverse(line.points.begin(), line.points.end());
    dec.lanes.emplace_back(l, std::move(line));
  }
  return dec;
}

std::string lanes_to_culane_lines(const DecodedLanes& dec) {
  std::vector<Polyline> lanes;
  lanes.reserve(dec.lanes.size());
  for (const auto& [idx, line] : dec.lanes) lanes.push_back(line);
  return lanes_to_lines_text(lanes);
}

}  // namespace lightlane
