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
#include <utility>
#include <vector>

#include "json.hpp"
#include "lightlane/imaging.hpp"
#include "lightlane/nn.hpp"

namespace lightlane {

// Resnet-style translation generator. The scale information match pads the
// input to a multiple of 2^downsample_stages, records feature dims ahead of
// each downsampling, and restores them exactly on the way back up, so output
// dims equal input dims for any input.
struct GeneratorConfig {
  int in_channels = 3;
  int base_channels = 64;
  int downsample_stages = 2;
  int residual_blocks = 9;
};

struct Generator {
  GeneratorConfig cfg;
  nn::Conv2d stem;
  nn::InstanceNorm2d stem_norm;
  std::vector<nn::Conv2d> down;
  std::vector<nn::InstanceNorm2d> down_norm;
  struct ResBlock {
    nn::Conv2d c1, c2;
    nn::InstanceNorm2d n1, n2;
  };
  std::vector<ResBlock> blocks;
  std::vector<nn::Deconv2d> up;
  std::vector<nn::InstanceNorm2d> up_norm;
  nn::Conv2d head;

  // x: [N,C,H,W] in [-1,1]; output has identical shape, values in [-1,1].
  Var forward(const Var& x) const;
  nn::ParamList params(const std::string& prefix) const;
  int pad_multiple() const { return 1 << cfg.downsample_stages; }
};

Generator make_generator(const GeneratorConfig& cfg, std::mt19937_64& rng);
Image generator_forward(const Generator& gen, const Image& img);

// Patch classifier: 4x4 convs with zero padding 1, strides 2 (n_layers times)
// then 1, 1; sigmoid score per overlapping patch.
struct DiscriminatorConfig {
  int in_channels = 3;
  int base_channels = 64;
  int n_layers = 3;  // stride-2 stages; 3 gives the 70x70 patch
};

struct PatchDiscriminator {
  DiscriminatorConfig cfg;
  std::vector<nn::Conv2d> convs;
  std::vector<nn::InstanceNorm2d> norms;  // for all but the first and last conv
  std::vector<int> strides;

  Var forward(const Var& x) const;  // [N,1,h',w'] scores in (0,1)
  nn::ParamList params(const std::string& prefix) const;
  int receptive_field() const;
};

PatchDiscriminator make_discriminator(const DiscriminatorConfig& cfg, std::mt19937_64& rng);
Tensor discriminator_forward(const PatchDiscriminator& d, const Image& img);

// Eq. 1. loss_d = -mean log d_real - mean log(1 - d_fake);
// loss_g = -mean log d_fake (non-saturating form of the same objective).
struct AdvLoss {
  Var loss_d;
  Var loss_g;
};
AdvLoss adversarial_loss(const Var& d_real_scores, const Var& d_fake_scores, real eps = 1e-7);
std::pair<real, real> adversarial_loss(const Tensor& d_real_scores, const Tensor& d_fake_scores,
                                       real eps = 1e-7);

// Least-squares variant on the same sigmoid scores, selectable per config.
AdvLoss adversarial_loss_lsq(const Var& d_real_scores, const Var& d_fake_scores);

// Eq. 2: mean L1 of both reconstructions.
Var cycle_loss(const Var& x, const Var& x_rec, const Var& y, const Var& y_rec);
real cycle_loss(const Tensor& x, const Tensor& x_rec, const Tensor& y, const Tensor& y_rec);

struct LossWeights {
  real lambda_cyc = 10.0;  // lambda in Eq. 3
};

// Eq. 3: L = L_GAN(G_A,D_B) + L_GAN(G_B,D_A) + lambda * L_cyc.
struct LossParts {
  real adv_a = 0;  // generator-side L_GAN(G_A, D_B)
  real adv_b = 0;  // generator-side L_GAN(G_B, D_A)
  real cyc = 0;
};
real total_loss(const LossParts& parts, const LossWeights& weights);

// History buffer of generated images; returns either the fresh fake or a
// stored one (50% each once full), storing the fresh fake in its place.
class ImagePool {
 public:
  ImagePool() = default;
  explicit ImagePool(int capacity) : capacity_(capacity) {
    LL_CHECK(capacity >= 0, "ImagePool: capacity must be >= 0");
  }
  Tensor query(const Tensor& fake, std::mt19937_64& rng);
  int capacity() const { return capacity_; }
  const std::vector<Tensor>& items() const { return items_; }
  void set_items(std::vector<Tensor> items);

 private:
  int capacity_ = 50;
  std::vector<Tensor> items_;
};

struct GanTrainConfig {
  GeneratorConfig gen;
  DiscriminatorConfig disc;
  LossWeights weights;
  real lr = 2e-4;
  real beta1 = 0.5;
  real beta2 = 0.999;
  int pool_capacity = 50;
  bool least_squares_adv = false;  // Eq. 1 log form by default
  uint64_t seed = 1;
};

void to_json(nlohmann::json& j, const GanTrainConfig& c);
void from_json(const nlohmann::json& j, GanTrainConfig& c);

// G_A: X (suitable light) -> Y (low light); G_B: Y -> X.
// D_A judges domain X; D_B judges domain Y.
struct GanBundle {
  GanTrainConfig cfg;
  Generator g_a, g_b;
  PatchDiscriminator d_a, d_b;
  ImagePool pool_a, pool_b;  // fakes of domain X / domain Y
  nn::Adam opt_g, opt_d;
  int64_t epoch = 0;
  std::mt19937_64 rng;
};

GanBundle make_gan_bundle(const GanTrainConfig& cfg);

struct GanLossRecord {
  real adv_g_a = 0;  // -log D_B(G_A(x))
  real adv_g_b = 0;  // -log D_A(G_B(y))
  real cyc = 0;
  real g_total = 0;
  real d_a = 0;
  real d_b = 0;
};

// One optimization step: generators first (adversarial + cycle), then both
// discriminators on real vs pool-mixed fakes. Batches may mix resolutions.
GanLossRecord gan_training_step(GanBundle& bundle, const std::vector<Tensor>& batch_x,
                                const std::vector<Tensor>& batch_y, const LossWeights& weights);

void save_gan_checkpoint(const GanBundle& bundle, const std::string& path);
GanBundle load_gan_checkpoint(const std::string& path);

}  // namespace lightlane
