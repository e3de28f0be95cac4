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

#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "lightlane/datasets.hpp"
#include "lightlane/nn.hpp"

namespace lightlane {

// Encoder-decoder with factorized-convolution residual blocks and a lane
// existence branch off the encoder's final features. The same scale-trace
// mechanics as the generator keep output dims equal to input dims.
struct DetectorConfig {
  int in_channels = 3;
  int lane_count = 4;       // L
  int base_channels = 16;   // first stage width; doubles per stage
  int encoder_stages = 3;   // stride-2 downsamplers
  int blocks_per_stage = 2;
  int exist_hidden = 32;
};

struct FactorizedBlock {
  nn::Conv2d v1, h1, v2, h2;  // 3x1 / 1x3 pairs
  nn::InstanceNorm2d n1, n2;
};

struct DetectorNet {
  DetectorConfig cfg;
  std::vector<nn::Conv2d> down;
  std::vector<nn::InstanceNorm2d> down_norm;
  std::vector<std::vector<FactorizedBlock>> stage_blocks;
  std::vector<nn::Deconv2d> up;
  std::vector<nn::InstanceNorm2d> up_norm;
  nn::Conv2d seg_head;  // 1x1 to L+1 channels
  nn::Linear exist_fc1, exist_fc2;

  // Minimum input dim so the top feature map keeps at least 4 px per axis.
  int min_input_dim() const { return 4 << cfg.encoder_stages; }
  int pad_multiple() const { return 1 << cfg.encoder_stages; }
  nn::ParamList params(const std::string& prefix) const;
};

DetectorNet make_detector(const DetectorConfig& cfg, std::mt19937_64& rng);

// Graph outputs for training; prob_maps [N,L+1,H,W] (softmax over channels),
// existence [N,L] (sigmoid).
struct DetectorOutVars {
  Var prob_maps;
  Var existence;
};
DetectorOutVars detector_forward_graph(const DetectorNet& net, const Var& x);

struct DetectorOutput {
  Tensor prob_maps;  // [N,L+1,H,W]
  Tensor existence;  // [N,L]
};
DetectorOutput detector_forward(const DetectorNet& net, const Image& img);

// Eq. 4: lambda_1 * seg NLL + lambda_2 * existence BCE.
struct DetectionLossWeights {
  real lambda_1 = 0.9;
  real lambda_2 = 0.1;
};

// seg_target: class index per pixel in [0, L], flattened [N,H,W] order.
// exist_target: [N,L] binaries. class_weights: per-class NLL weights of size
// L+1; empty means uniform.
Var detection_loss(const DetectorOutVars& out, const std::vector<int>& seg_target,
                   const Tensor& exist_target, const DetectionLossWeights& w,
                   const std::vector<real>& class_weights = {});
real detection_loss(const DetectorOutput& out, const std::vector<int>& seg_target,
                    const Tensor& exist_target, const DetectionLossWeights& w,
                    const std::vector<real>& class_weights = {});

struct DetectorTrainConfig {
  DetectorConfig net;
  DetectionLossWeights loss_weights;
  real bg_class_weight = 0.4;  // lanes are sparse; uniform weights collapse
  real lr = 0.01;
  real momentum = 0.9;
  real poly_power = 0.9;
  int epochs = 12;
  int batch = 12;
  int resize_h = 0;  // 0 keeps native resolution
  int resize_w = 0;
  uint64_t seed = 1;
};

void to_json(nlohmann::json& j, const DetectorTrainConfig& c);
void from_json(const nlohmann::json& j, DetectorTrainConfig& c);

struct DetectorBundle {
  DetectorTrainConfig cfg;
  DetectorNet net;
  nn::Sgd opt;
  int64_t epoch = 0;
  std::mt19937_64 rng;
};

DetectorBundle make_detector_bundle(const DetectorTrainConfig& cfg);

struct DetectorEpochRecord {
  int epoch = 0;
  real train_loss = 0;
  real val_miou = 0;
  real val_exist_acc = 0;
  real lr = 0;
};

// SGD with momentum and polynomial lr decay; logs one record per epoch
// (train loss, validation mean-IoU over lane classes) as JSON lines when
// log_path is non-empty. Entries needing labels must provide seg masks and
// existence flags.
DetectorBundle train_detector(const DetectorTrainConfig& cfg,
                              const std::vector<ListEntry>& train_list,
                              const std::vector<ListEntry>& val_list,
                              const std::string& log_path,
                              std::vector<DetectorEpochRecord>* history = nullptr);

void save_detector_checkpoint(const DetectorBundle& bundle, const std::string& path);
DetectorBundle load_detector_checkpoint(const std::string& path);

// Validation segmentation quality: mean IoU over lane classes present in
// ground truth plus existence accuracy.
std::pair<real, real> detector_validate(const DetectorNet& net,
                                        const std::vector<ListEntry>& val_list, int resize_h = 0,
                                        int resize_w = 0);

}  // namespace lightlane
