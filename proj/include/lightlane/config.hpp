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
#include "lightlane/detector.hpp"
#include "lightlane/evaluator.hpp"
#include "lightlane/transfer.hpp"

namespace lightlane {

// Inference decoding knobs; the paper values are the "full" defaults.
struct DecodeConfig {
  real exist_thresh = 0.5;
  int row_stride = 20;
  real row_prob_floor = 0.3;
};

void to_json(nlohmann::json& j, const DecodeConfig& c);
void from_json(const nlohmann::json& j, DecodeConfig& c);

// Everything a pipeline run needs. The "full" profile carries the published
// hyperparameters; "desk" shrinks models and data to CPU-minutes scale.
struct RunConfig {
  std::string profile = "desk";
  uint64_t seed = 7;

  std::string out_dir = "out";
  std::string domain_x_list;  // suitable-light images
  std::string domain_y_list;  // low-light images
  std::string train_list;
  std::string val_list;
  std::string test_list;
  std::string category_index;
  std::string gan_checkpoint;
  std::string detector_checkpoint;
  std::string manifest;

  real ratio_n = 1.0;
  std::vector<real> ratio_sweep;

  TransferTrainConfig transfer;
  DetectorTrainConfig detector;
  EvalConfig eval;
  DecodeConfig decode;
  SyntheticSceneConfig synth;
  int synth_count = 64;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

// Profile defaults; the only valid names are "desk" and "full".
RunConfig default_config(const std::string& profile);

// Fails with the offending dotted key path when the patch contains a key the
// defaults do not know.
void check_known_keys(const nlohmann::json& patch, const nlohmann::json& schema,
                      const std::string& prefix = "");

// Profile defaults, overlaid with the JSON file (unknown keys rejected),
// overlaid with LIGHTLANE_* environment variables. "__" in a variable name
// descends one level: LIGHTLANE_DETECTOR__LR=0.02 sets detector.lr. Values
// parse as JSON where possible, otherwise as strings.
RunConfig load_run_config(const std::string& path, const std::string& profile_override = "");

// Env-only variant used when no config file is given.
RunConfig config_from_profile(const std::string& profile);

}  // namespace lightlane
