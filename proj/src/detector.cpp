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

#include "lightlane/detector.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "lightlane/image_io.hpp"
#include "lightlane/random.hpp"
#include "lightlane/serialize.hpp"

namespace lightlane {

namespace {

Var pad_v(const Var& x) { return ops::pad2d(x, 1, 1, 0, 0, ops::PadMode::kZero); }
Var pad_h(const Var& x) { return ops::pad2d(x, 0, 0, 1, 1, ops::PadMode::kZero); }

Var factorized_block_forward(const FactorizedBlock& b, const Var& x) {
  Var t = ops::relu(b.v1(pad_v(x)));
  t = ops::relu(b.n1(b.h1(pad_h(t))));
  t = ops::relu(b.v2(pad_v(t)));
  t = b.n2(b.h2(pad_h(t)));
  return ops::relu(ops::add(x, t));
}

FactorizedBlock make_factorized_block(int c, std::mt19937_64& rng) {
  FactorizedBlock b;
  b.v1 = nn::make_conv(c, c, 3, 1, 1, 1, false, 0, rng);
  b.h1 = nn::make_conv(c, c, 1, 3, 1, 1, false, 0, rng);
  b.n1 = nn::make_instance_norm(c);
  b.v2 = nn::make_conv(c, c, 3, 1, 1, 1, false, 0, rng);
  b.h2 = nn::make_conv(c, c, 1, 3, 1, 1, false, 0, rng);
  b.n2 = nn::make_instance_norm(c);
  return b;
}

}  // namespace

DetectorNet make_detector(const DetectorConfig& cfg, std::mt19937_64& rng) {
  LL_CHECK(cfg.lane_count >= 1 && cfg.encoder_stages >= 1 && cfg.base_channels >= 1 &&
               cfg.blocks_per_stage >= 1,
           "DetectorConfig: counts must be >= 1");
  DetectorNet net;
  net.cfg = cfg;
  const int b = cfg.base_channels;
  for (int i = 0; i < cfg.encoder_stages; ++i) {
    const int ci = i == 0 ? cfg.in_channels : b << (i - 1);
    const int co = b << i;
    net.down.push_back(nn::make_conv(ci, co, 3, 3, 2, 2, false, 0, rng));
    net.down_norm.push_back(nn::make_instance_norm(co));
    std::vector<FactorizedBlock> blocks;
    for (int k = 0; k < cfg.blocks_per_stage; ++k) blocks.push_back(make_factorized_block(co, rng));
    net.stage_blocks.push_back(std::move(blocks));
  }
  for (int j = 0; j < cfg.encoder_stages; ++j) {
    const int ci = j == 0 ? b << (cfg.encoder_stages - 1) : net.up[static_cast<size_t>(j - 1)].w->value.size(1);
    const int co = j < cfg.encoder_stages - 1 ? b << (cfg.encoder_stages - 2 - j) : b;
    net.up.push_back(nn::make_deconv(ci, co, 3, 3, 2, 2, false, 0, rng));
    net.up_norm.push_back(nn::make_instance_norm(co));
  }
  net.seg_head = nn::make_conv(b, cfg.lane_count + 1, 1, 1, 1, 1, true, 0, rng);
  const int top = b << (cfg.encoder_stages - 1);
  net.exist_fc1 = nn::make_linear(top, cfg.exist_hidden, true, 0, rng);
  net.exist_fc2 = nn::make_linear(cfg.exist_hidden, cfg.lane_count, true, 0, rng);
  return net;
}

nn::ParamList DetectorNet::params(const std::string& prefix) const {
  nn::ParamList out;
  for (size_t i = 0; i < down.size(); ++i) {
    down[i].collect(prefix + ".down" + std::to_string(i), out);
    down_norm[i].collect(prefix + ".down_norm" + std::to_string(i), out);
    for (size_t k = 0; k < stage_blocks[i].size(); ++k) {
      const std::string p =
          prefix + ".stage" + std::to_string(i) + ".block" + std::to_string(k);
      const FactorizedBlock& fb = stage_blocks[i][k];
      fb.v1.collect(p + ".v1", out);
      fb.h1.collect(p + ".h1", out);
      fb.n1.collect(p + ".n1", out);
      fb.v2.collect(p + ".v2", out);
      fb.h2.collect(p + ".h2", out);
      fb.n2.collect(p + ".n2", out);
    }
  }
  for (size_t j = 0; j < up.size(); ++j) {
    up[j].collect(prefix + ".up" + std::to_string(j), out);
    up_norm[j].collect(prefix + ".up_norm" + std::to_string(j), out);
  }
  seg_head.collect(prefix + ".seg_head", out);
  exist_fc1.collect(prefix + ".exist_fc1", out);
  exist_fc2.collect(prefix + ".exist_fc2", out);
  return out;
}

DetectorOutVars detector_forward_graph(const DetectorNet& net, const Var& x) {
  LL_CHECK(x->value.ndim() == 4 && x->value.size(1) == net.cfg.in_channels,
           "Detector: input must be [N,C,H,W] with configured channels");
  const int in_h = x->value.size(2), in_w = x->value.size(3);
  const int min_dim = net.min_input_dim();
  LL_CHECK(in_h >= min_dim && in_w >= min_dim, "Detector: undersized input");

  const int m = net.pad_multiple();
  const int pb = (in_h + m - 1) / m * m - in_h;
  const int pr = (in_w + m - 1) / m * m - in_w;
  Var h = (pb || pr) ? ops::pad2d(x, 0, pb, 0, pr, ops::PadMode::kReflect) : x;

  std::vector<std::pair<int, int>> stage_dims;
  for (size_t i = 0; i < net.down.size(); ++i) {
    stage_dims.emplace_back(h->value.size(2), h->value.size(3));
    h = ops::relu(net.down_norm[i](net.down[i](ops::pad2d(h, 1, 1, 1, 1, ops::PadMode::kZero))));
    for (const auto& blk : net.stage_blocks[i]) h = factorized_block_forward(blk, h);
  }

  Var exist = ops::global_avg_pool(h);
  exist = ops::relu(net.exist_fc1(exist));
  exist = ops::sigmoid_v(net.exist_fc2(exist));

  for (size_t j = 0; j < net.up.size(); ++j) {
    const auto [th, tw] = stage_dims[stage_dims.size() - 1 - j];
    h = ops::fit_hw(net.up[j](h), th, tw);
    h = ops::relu(net.up_norm[j](h));
  }

  Var logits = net.seg_head(h);
  if (pb || pr) logits = ops::crop2d(logits, 0, 0, in_h, in_w);
  DetectorOutVars out;
  out.prob_maps = ops::softmax_channels(logits);
  out.existence = exist;
  return out;
}

DetectorOutput detector_forward(const DetectorNet& net, const Image& img) {
  Var x = make_leaf(image_to_tensor(img), false);
  DetectorOutVars v = detector_forward_graph(net, x);
  return {v.prob_maps->value, v.existence->value};
}

Var detection_loss(const DetectorOutVars& out, const std::vector<int>& seg_target,
                   const Tensor& exist_target, const DetectionLossWeights& w,
                   const std::vector<real>& class_weights) {
  LL_CHECK(w.lambda_1 >= 0 && w.lambda_2 >= 0, "detection_loss: weights must be >= 0");
  const int k = out.prob_maps->value.size(1);
  std::vector<real> cw = class_weights;
  if (cw.empty()) cw.assign(static_cast<size_t>(k), real(1));
  LL_CHECK(exist_target.numel() == out.existence->value.numel(),
           "detection_loss: existence target size mismatch");
  Var seg = ops::nll_from_probs(out.prob_maps, seg_target, cw, 1e-12);
  Var exist = ops::bce_loss(out.existence, exist_target, 1e-7);
  return ops::add(ops::scale(seg, w.lambda_1), ops::scale(exist, w.lambda_2));
}

real detection_loss(const DetectorOutput& out, const std::vector<int>& seg_target,
                    const Tensor& exist_target, const DetectionLossWeights& w,
                    const std::vector<real>& class_weights) {
  DetectorOutVars v{ops::constant(out.prob_maps), ops::constant(out.existence)};
  return detection_loss(v, seg_target, exist_target, w, class_weights)->value.item();
}

void to_json(nlohmann::json& j, const DetectorTrainConfig& c) {
  j = nlohmann::json{{"net",
                      {{"in_channels", c.net.in_channels},
                       {"lane_count", c.net.lane_count},
                       {"base_channels", c.net.base_channels},
                       {"encoder_stages", c.net.encoder_stages},
                       {"blocks_per_stage", c.net.blocks_per_stage},
                       {"exist_hidden", c.net.exist_hidden}}},
                     {"lambda_1", c.loss_weights.lambda_1},
                     {"lambda_2", c.loss_weights.lambda_2},
                     {"bg_class_weight", c.bg_class_weight},
                     {"lr", c.lr},
                     {"momentum", c.momentum},
                     {"poly_power", c.poly_power},
                     {"epochs", c.epochs},
                     {"batch", c.batch},
                     {"resize_h", c.resize_h},
                     {"resize_w", c.resize_w},
                     {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, DetectorTrainConfig& c) {
  const auto& n = j.at("net");
  c.net.in_channels = n.at("in_channels").get<int>();
  c.net.lane_count = n.at("lane_count").get<int>();
  c.net.base_channels = n.at("base_channels").get<int>();
  c.net.encoder_stages = n.at("encoder_stages").get<int>();
  c.net.blocks_per_stage = n.at("blocks_per_stage").get<int>();
  c.net.exist_hidden = n.at("exist_hidden").get<int>();
  c.loss_weights.lambda_1 = j.at("lambda_1").get<real>();
  c.loss_weights.lambda_2 = j.at("lambda_2").get<real>();
  c.bg_class_weight = j.at("bg_class_weight").get<real>();
  c.lr = j.at("lr").get<real>();
  c.momentum = j.at("momentum").get<real>();
  c.poly_power = j.at("poly_power").get<real>();
  c.epochs = j.at("epochs").get<int>();
  c.batch = j.at("batch").get<int>();
  c.resize_h = j.at("resize_h").get<int>();
  c.resize_w = j.at("resize_w").get<int>();
  c.seed = j.at("seed").get<uint64_t>();
}

DetectorBundle make_detector_bundle(const DetectorTrainConfig& cfg) {
  DetectorBundle b;
  b.cfg = cfg;
  auto rng_init = make_rng(cfg.seed, 11);
  b.net = make_detector(cfg.net, rng_init);
  b.opt = nn::Sgd(b.net.params("det"), cfg.momentum);
  b.rng = make_rng(cfg.seed, 12);
  return b;
}

namespace {

struct Sample {
  Tensor img;              // [1,C,H,W]
  std::vector<int> seg;    // H*W class indices
  std::vector<real> exist; // L
};

// Nearest-neighbor resize for class-index masks.
Image resize_nearest(const Image& img, int out_h, int out_w) {
  if (out_h == img.height && out_w == img.width) return img;
  Image out(img.channels, out_h, out_w);
  for (int y = 0; y < out_h; ++y) {
    const int sy = std::min(img.height - 1,
                            static_cast<int>(static_cast<real>(y) * img.height / out_h));
    for (int x = 0; x < out_w; ++x) {
      const int sx = std::min(img.width - 1,
                              static_cast<int>(static_cast<real>(x) * img.width / out_w));
      for (int c = 0; c < img.channels; ++c) out.at(c, y, x) = img.at(c, sy, sx);
    }
  }
  return out;
}

Sample load_sample(const ListEntry& e, int lane_count, int resize_h, int resize_w) {
  LL_REQUIRE(!e.seg_label_path.empty() && !e.existence.empty(),
             "training entry lacks labels: " + e.image_path);
  LL_REQUIRE(static_cast<int>(e.existence.size()) == lane_count,
             "existence flag count mismatch: " + e.image_path);
  Image img = load_image_rgb(e.image_path);
  Image seg = load_label_mask(e.seg_label_path);
  if (resize_h > 0 && resize_w > 0) {
    img = resize_bilinear(img, resize_h, resize_w);
    seg = resize_nearest(seg, resize_h, resize_w);
  }
  LL_REQUIRE(seg.height == img.height && seg.width == img.width,
             "segmentation mask dims differ from image: " + e.image_path);
  Sample s;
  s.img = image_to_tensor(img);
  s.seg.reserve(static_cast<size_t>(seg.height) * seg.width);
  for (int y = 0; y < seg.height; ++y)
    for (int x = 0; x < seg.width; ++x) {
      const int cls = static_cast<int>(std::lround(seg.at(0, y, x)));
      LL_REQUIRE(cls >= 0 && cls <= lane_count,
                 "class index out of range in " + e.seg_label_path);
      s.seg.push_back(cls);
    }
  for (int f : e.existence) s.exist.push_back(static_cast<real>(f));
  return s;
}

std::vector<Sample> load_samples(const std::vector<ListEntry>& list, int lane_count,
                                 int resize_h, int resize_w) {
  std::vector<Sample> out;
  size_t skipped = 0;
  for (const auto& e : list) {
    try {
      out.push_back(load_sample(e, lane_count, resize_h, resize_w));
    } catch (const std::exception& ex) {
      ++skipped;
      std::cerr << "warning: skipping " << e.image_path << ": " << ex.what() << "\n";
    }
  }
  LL_REQUIRE(skipped * 10 <= list.size(),
             "more than 10% of entries unusable (" + std::to_string(skipped) + "/" +
                 std::to_string(list.size()) + ")");
  LL_REQUIRE(!out.empty(), "no usable training entries");
  return out;
}

}  // namespace

DetectorBundle train_detector(const DetectorTrainConfig& cfg,
                              const std::vector<ListEntry>& train_list,
                              const std::vector<ListEntry>& val_list,
                              const std::string& log_path,
                              std::vector<DetectorEpochRecord>* history) {
  LL_CHECK(!train_list.empty(), "train_detector: empty train list");
  LL_CHECK(cfg.epochs >= 0 && cfg.batch >= 1, "train_detector: bad epochs/batch");
  DetectorBundle bundle = make_detector_bundle(cfg);

  const int L = cfg.net.lane_count;
  std::vector<Sample> train = load_samples(train_list, L, cfg.resize_h, cfg.resize_w);

  std::ofstream log;
  if (!log_path.empty()) {
    log.open(log_path);
    LL_REQUIRE(log.good(), "cannot open log: " + log_path);
  }

  std::vector<real> class_weights(static_cast<size_t>(L + 1), real(1));
  class_weights[0] = cfg.bg_class_weight;

  const int64_t steps_per_epoch =
      (static_cast<int64_t>(train.size()) + cfg.batch - 1) / cfg.batch;
  const int64_t total_steps = std::max<int64_t>(1, steps_per_epoch * cfg.epochs);
  int64_t step = 0;

  std::vector<size_t> order(train.size());
  std::iota(order.begin(), order.end(), size_t{0});

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    auto rng_epoch = make_rng(cfg.seed, 100 + static_cast<uint64_t>(epoch));
    std::shuffle(order.begin(), order.end(), rng_epoch);
    real epoch_loss = 0;
    int64_t batches = 0;
    real lr = cfg.lr;
    for (size_t pos = 0; pos < order.size(); pos += static_cast<size_t>(cfg.batch)) {
      const size_t bsz = std::min(static_cast<size_t>(cfg.batch), order.size() - pos);
      const Tensor& first = train[order[pos]].img;
      const int c = first.size(1), hh = first.size(2), ww = first.size(3);
      Tensor batch({static_cast<int>(bsz), c, hh, ww});
      Tensor exist({static_cast<int>(bsz), L});
      std::vector<int> seg;
      seg.reserve(bsz * static_cast<size_t>(hh) * ww);
      for (size_t bi = 0; bi < bsz; ++bi) {
        const Sample& s = train[order[pos + bi]];
        LL_REQUIRE(s.img.size(2) == hh && s.img.size(3) == ww,
                   "mixed resolutions in one batch; set resize_h/resize_w");
        std::copy(s.img.data(), s.img.data() + s.img.numel(),
                  batch.data() + batch.idx4(static_cast<int>(bi), 0, 0, 0));
        seg.insert(seg.end(), s.seg.begin(), s.seg.end());
        for (int l = 0; l < L; ++l)
          exist[static_cast<int64_t>(bi) * L + l] = s.exist[static_cast<size_t>(l)];
      }
      Var x = make_leaf(std::move(batch));
      DetectorOutVars out = detector_forward_graph(bundle.net, x);
      Var loss = detection_loss(out, seg, exist, cfg.loss_weights, class_weights);
      bundle.opt.zero_grad();
      backward(loss);
      lr = cfg.lr * std::pow(real(1) - static_cast<real>(step) / static_cast<real>(total_steps),
                             cfg.poly_power);
      bundle.opt.step(lr);
      ++step;
      epoch_loss += loss->value.item();
      ++batches;
    }
    bundle.epoch = epoch + 1;

    DetectorEpochRecord rec;
    rec.epoch = epoch + 1;
    rec.train_loss = epoch_loss / static_cast<real>(std::max<int64_t>(1, batches));
    if (!val_list.empty()) {
      const auto [miou, exist_acc] =
          detector_validate(bundle.net, val_list, cfg.resize_h, cfg.resize_w);
      rec.val_miou = miou;
      rec.val_exist_acc = exist_acc;
    }
    rec.lr = lr;
    if (history) history->push_back(rec);
    if (log.is_open()) {
      nlohmann::json j{{"epoch", rec.epoch},
                       {"train_loss", rec.train_loss},
                       {"val_miou", rec.val_miou},
                       {"val_exist_acc", rec.val_exist_acc},
                       {"lr", rec.lr}};
      log << j.dump() << "\n";
      log.flush();
    }
  }
  return bundle;
}

std::pair<real, real> detector_validate(const DetectorNet& net,
                                        const std::vector<ListEntry>& val_list, int resize_h,
                                        int resize_w) {
  const int L = net.cfg.lane_count;
  std::vector<int64_t> inter(static_cast<size_t>(L), 0), uni(static_cast<size_t>(L), 0);
  int64_t exist_hits = 0, exist_total = 0;
  for (const auto& e : val_list) {
    const Sample s = load_sample(e, L, resize_h, resize_w);
    Var x = make_leaf(s.img, false);
    DetectorOutVars out = detector_forward_graph(net, x);
    const Tensor& p = out.prob_maps->value;
    const int hh = p.size(2), ww = p.size(3);
    size_t pix = 0;
    for (int y = 0; y < hh; ++y)
      for (int xx = 0; xx < ww; ++xx, ++pix) {
        int best = 0;
        real bv = p.at4(0, 0, y, xx);
        for (int c = 1; c <= L; ++c) {
          const real v = p.at4(0, c, y, xx);
          if (v > bv) {
            bv = v;
            best = c;
          }
        }
        const int gt = s.seg[pix];
        for (int c = 1; c <= L; ++c) {
          const bool in_pred = best == c, in_gt = gt == c;
          if (in_pred && in_gt) ++inter[static_cast<size_t>(c - 1)];
          if (in_pred || in_gt) ++uni[static_cast<size_t>(c - 1)];
        }
      }
    for (int l = 0; l < L; ++l) {
      const bool pred = out.existence->value[l] > 0.5;
      const bool gt = s.exist[static_cast<size_t>(l)] > 0.5;
      if (pred == gt) ++exist_hits;
      ++exist_total;
    }
  }
  real miou = 0;
  int present = 0;
  for (int l = 0; l < L; ++l)
    if (uni[static_cast<size_t>(l)] > 0) {
      miou += static_cast<real>(inter[static_cast<size_t>(l)]) /
              static_cast<real>(uni[static_cast<size_t>(l)]);
      ++present;
    }
  miou = present ? miou / present : 0;
  const real exist_acc =
      exist_total ? static_cast<real>(exist_hits) / static_cast<real>(exist_total) : 0;
  return {miou, exist_acc};
}

void save_detector_checkpoint(const DetectorBundle& bundle, const std::string& path) {
  TensorArchive a;
  a.meta["format"] = "lightlane.detector.v1";
  a.meta["epoch"] = bundle.epoch;
  a.meta["config"] = bundle.cfg;
  std::ostringstream rs;
  rs << bundle.rng;
  a.meta["rng"] = rs.str();
  for (const auto& np : bundle.opt.params) a.put(np.name, np.p->value);
  for (size_t i = 0; i < bundle.opt.params.size(); ++i)
    a.put("opt.vel." + bundle.opt.params[i].name, bundle.opt.vel[i]);
  a.save(path);
}

DetectorBundle load_detector_checkpoint(const std::string& path) {
  TensorArchive a = TensorArchive::load(path);
  LL_REQUIRE(a.meta.value("format", "") == "lightlane.detector.v1",
             "not a detector checkpoint: " + path);
  DetectorTrainConfig cfg = a.meta.at("config").get<DetectorTrainConfig>();
  DetectorBundle b = make_detector_bundle(cfg);
  b.epoch = a.meta.at("epoch").get<int64_t>();
  for (const auto& np : b.opt.params) {
    const Tensor& t = a.get(np.name);
    LL_REQUIRE(t.same_shape(np.p->value), "checkpoint shape mismatch at " + np.name);
    np.p->value = t;
  }
  for (size_t i = 0; i < b.opt.params.size(); ++i)
    b.opt.vel[i] = a.get("opt.vel." + b.opt.params[i].name);
  std::istringstream rs(a.meta.at("rng").get<std::string>());
  rs >> b.rng;
  LL_REQUIRE(!rs.fail(), "corrupt rng state in " + path);
  return b;
}

}  // namespace lightlane
