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

#include <string>
#include <utility>
#include <vector>

#include "lightlane/detector.hpp"
#include "lightlane/imaging.hpp"

namespace lightlane {

// Lanes that survived decoding, keyed by lane slot index, plus the raw
// existence confidences for all L slots.
struct DecodedLanes {
  std::vector<std::pair<int, Polyline>> lanes;
  std::vector<real> confidences;
};

// Row-sampled argmax decoding: lanes whose existence confidence is strictly
// above exist_thresh are scanned from the bottom row upward every row_stride
// rows; each sampled row contributes the argmax column of that lane's
// probability map if the maximum reaches row_prob_floor (ties take the
// smaller column). Lanes with fewer than two kept points are dropped.
// Output polylines are ordered by increasing y.
DecodedLanes decode_lanes(const DetectorOutput& out, real exist_thresh = 0.5,
                          int row_stride = 20, real row_prob_floor = 0.3);

// One text line per lane: space-separated "x y" pairs in increasing-y order.
std::string lanes_to_culane_lines(const DecodedLanes& dec);

}  // namespace lightlane
