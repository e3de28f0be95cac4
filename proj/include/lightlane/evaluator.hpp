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

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lightlane/imaging.hpp"

namespace lightlane {

// CULane-protocol scoring: lanes are rasterized as wide lines and matched
// one-to-one by IoU above a threshold.
struct EvalConfig {
  int line_width = 30;
  real iou_threshold = 0.5;
  int canvas_h = 590;
  int canvas_w = 1640;
};

struct MatchResult {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  std::vector<int> assignment;  // per-pred gt index, -1 if unmatched
};

struct CategoryCounts {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t fn = 0;
  real precision = 0;
  real recall = 0;
  real f1 = 0;
};

struct EvalReport {
  std::map<std::string, CategoryCounts> per_category;
  std::map<std::string, int64_t> fp_only_categories;  // no ground truth anywhere
  CategoryCounts total;                               // pooled over scored categories
};

void to_json(nlohmann::json& j, const EvalConfig& c);
void from_json(const nlohmann::json& j, EvalConfig& c);

// IoU of the two lanes rasterized at cfg.line_width on the eval canvas.
// Symmetric; 0 when the union is empty.
real lane_iou(const Polyline& pred, const Polyline& gt, const EvalConfig& cfg);

// One-to-one assignment maximizing matched pairs with IoU > threshold;
// cardinality ties broken by maximum total IoU.
MatchResult match_lanes(const std::vector<Polyline>& preds, const std::vector<Polyline>& gts,
                        const EvalConfig& cfg);

// Scores every image in the category index: ground truth from gt_dir,
// predictions from pred_dir (missing prediction file counts as all-FN).
// Categories with no ground-truth lanes report FP only and are excluded
// from the pooled total.
EvalReport evaluate_dataset(const std::string& pred_dir, const std::string& gt_dir,
                            const std::vector<std::pair<std::string, std::string>>& category_index,
                            const EvalConfig& cfg);

// Human-readable table with one-decimal percentages.
std::string format_report(const EvalReport& report);

nlohmann::json report_to_json(const EvalReport& report);

}  // namespace lightlane
