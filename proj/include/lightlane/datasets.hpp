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
#include <vector>

#include "json.hpp"
#include "lightlane/imaging.hpp"

namespace lightlane {

// Ordered lanes plus per-lane existence (a lane counts as existent iff its
// annotation has at least 2 points).
struct LaneAnnotation {
  std::vector<Polyline> lanes;
  std::vector<int> existence;
};

struct ListEntry {
  std::string image_path;
  std::string seg_label_path;   // empty when absent
  std::vector<int> existence;   // empty when absent
  std::string category;         // empty when absent
};

enum class DomainTag { kSuitableLight, kLowLight };

struct DomainDataset {
  DomainTag domain_tag = DomainTag::kSuitableLight;
  std::vector<ListEntry> entries;
  uint64_t sampler_seed = 0;
};

// ".lines.txt": one lane per line, alternating x y floats.
LaneAnnotation parse_lines_file(const std::string& path);
LaneAnnotation parse_lines_text(const std::string& text, const std::string& origin);

// One output line per lane: "x y x y ..." with increasing row order.
std::string lanes_to_lines_text(const std::vector<Polyline>& lanes);

// Training list: "<image> <seg label> <flag x L>" per line. Relative paths
// resolve against the list file's directory.
std::vector<ListEntry> load_train_list(const std::string& path, int lane_slots);
void write_train_list(const std::string& path, const std::vector<ListEntry>& entries);

// Unlabeled list: one image path per line; relative paths resolve against
// the list file's directory.
std::vector<std::string> load_image_list(const std::string& path);
void write_image_list(const std::string& path, const std::vector<std::string>& paths);

// Category index: "<image path>\t<category>" per line.
std::vector<std::pair<std::string, std::string>> load_category_index(const std::string& path);

// The companion annotation path of an image ("a/b.png" -> "a/b.lines.txt").
std::string lines_path_for(const std::string& image_path);

// Desk-scale scene source. Bright and dark renders from the same seed share
// identical lane geometry; only the light transform and its noise differ.
struct SyntheticSceneConfig {
  int canvas_h = 64;
  int canvas_w = 128;
  int lane_slots = 4;
  int min_lanes = 2;
  int max_lanes = 4;
  real curvature_min = -0.3;
  real curvature_max = 0.3;
  std::string light_domain = "bright";  // "bright" | "dark"
  real bright_brightness = 1.0;
  real bright_gamma = 1.0;
  real bright_noise_sigma = 0.0;
  real dark_brightness = 0.35;
  real dark_gamma = 2.2;
  real dark_noise_sigma = 0.02;
  int label_width = 5;  // segmentation stroke width, px
  uint64_t seed = 7;
};

void to_json(nlohmann::json& j, const SyntheticSceneConfig& c);
void from_json(const nlohmann::json& j, SyntheticSceneConfig& c);

// Writes images/, labels/, per-image ".lines.txt", "list.txt" and
// "categories.txt" under out_dir; returns entries with absolute paths.
DomainDataset synth_generate(const SyntheticSceneConfig& cfg, int n, const std::string& out_dir);

}  // namespace lightlane
