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

#include "lightlane/simcyclegan.hpp"

#include <algorithm>
#include <sstream>

#include "lightlane/random.hpp"
#include "lightlane/serialize.hpp"

namespace lightlane {

namespace {

constexpr real kScoreEps = 1e-7;
constexpr real kGanInitStd = 0.02;

Var reflect1(const Var& x) { return ops::pad2d(x, 1, 1, 1, 1, ops::PadMode::kReflect); }

}  // namespace

Generator make_generator(const GeneratorConfig& cfg, std::mt19937_64& rng) {
  LL_CHECK(cfg.downsample_stages >= 1 && cfg.residual_blocks >= 1,
           "GeneratorConfig: stages and blocks must be >= 1");
  Generator g;
  g.cfg = cfg;
  const int b = cfg.base_channels;
  g.stem = nn::make_conv(cfg.in_channels, b, 7, 7, 1, 1, false, kGanInitStd, rng);
  g.stem_norm = nn::make_instance_norm(b);
  for (int i = 0; i < cfg.downsample_stages; ++i) {
    const int ci = b << i, co = b << (i + 1);
    g.down.push_back(nn::make_conv(ci, co, 3, 3, 2, 2, false, kGanInitStd, rng));
    g.down_norm.push_back(nn::make_instance_norm(co));
  }
  const int top = b << cfg.downsample_stages;
  for (int i = 0; i < cfg.residual_blocks; ++i) {
    Generator::ResBlock rb;
    rb.c1 = nn::make_conv(top, top, 3, 3, 1, 1, false, kGanInitStd, rng);
    rb.n1 = nn::make_instance_norm(top);
    rb.c2 = nn::make_conv(top, top, 3, 3, 1, 1, false, kGanInitStd, rng);
    rb.n2 = nn::make_instance_norm(top);
    g.blocks.push_back(std::move(rb));
  }
  for (int i = 0; i < cfg.downsample_stages; ++i) {
    const int ci = b << (cfg.downsample_stages - i), co = ci / 2;
    g.up.push_back(nn::make_deconv(ci, co, 3, 3, 2, 2, false, kGanInitStd, rng));
    g.up_norm.push_back(nn::make_instance_norm(co));
  }
  g.head = nn::make_conv(b, cfg.in_channels, 7, 7, 1, 1, true, kGanInitStd, rng);
  return g;
}

Var Generator::forward(const Var& x) const {
  LL_CHECK(x->value.ndim() == 4 && x->value.size(1) == cfg.in_channels,
           "Generator: input must be [N,C,H,W] with configured channels");
  const int in_h = x->value.size(2), in_w = x->value.size(3);
  LL_CHECK(in_h >= 1 && in_w >= 1, "Generator: empty input");
  const int m = pad_multiple();
  const int pb = (in_h + m - 1) / m * m - in_h;
  const int pr = (in_w + m - 1) / m * m - in_w;
  Var h = (pb || pr) ? ops::pad2d(x, 0, pb, 0, pr, ops::PadMode::kReflect) : x;

  h = ops::relu(stem_norm(stem(ops::pad2d(h, 3, 3, 3, 3, ops::PadMode::kReflect))));

  std::vector<std::pair<int, int>> stage_dims;
  for (size_t i = 0; i < down.size(); ++i) {
    stage_dims.emplace_back(h->value.size(2), h->value.size(3));
    h = ops::relu(down_norm[i](down[i](reflect1(h))));
  }

  for (const auto& rb : blocks) {
    Var r = ops::relu(rb.n1(rb.c1(reflect1(h))));
    r = rb.n2(rb.c2(reflect1(r)));
    h = ops::add(h, r);
  }

  for (size_t i = 0; i < up.size(); ++i) {
    const auto [th, tw] = stage_dims[stage_dims.size() - 1 - i];
    h = ops::fit_hw(up[i](h), th, tw);
    h = ops::relu(up_norm[i](h));
  }

  h = ops::tanh_v(head(ops::pad2d(h, 3, 3, 3, 3, ops::PadMode::kReflect)));
  if (pb || pr) h = ops::crop2d(h, 0, 0, in_h, in_w);
  return h;
}

nn::ParamList Generator::params(const std::string& prefix) const {
  nn::ParamList out;
  stem.collect(prefix + ".stem", out);
  stem_norm.collect(prefix + ".stem_norm", out);
  for (size_t i = 0; i < down.size(); ++i) {
    down[i].collect(prefix + ".down" + std::to_string(i), out);
    down_norm[i].collect(prefix + ".down_norm" + std::to_string(i), out);
  }
  for (size_t i = 0; i < blocks.size(); ++i) {
    const std::string p = prefix + ".res" + std::to_string(i);
    blocks[i].c1.collect(p + ".c1", out);
    blocks[i].n1.collect(p + ".n1", out);
    blocks[i].c2.collect(p + ".c2", out);
    blocks[i].n2.collect(p + ".n2", out);
  }
  for (size_t i = 0; i < up.size(); ++i) {
    up[i].collect(prefix + ".up" + std::to_string(i), out);
    up_norm[i].collect(prefix + ".up_norm" + std::to_string(i), out);
  }
  head.collect(prefix + ".head", out);
  return out;
}

Image generator_forward(const Generator& gen, const Image& img) {
  Var x = make_leaf(image_to_tensor(img), false);
  Var y = gen.forward(x);
  return tensor_to_image(y->value, 0);
}

PatchDiscriminator make_discriminator(const DiscriminatorConfig& cfg, std::mt19937_64& rng) {
  LL_CHECK(cfg.n_layers >= 1, "DiscriminatorConfig: n_layers must be >= 1");
  PatchDiscriminator d;
  d.cfg = cfg;
  const int b = cfg.base_channels;
  int prev = cfg.in_channels;
  for (int i = 0; i <= cfg.n_layers; ++i) {
    const int mult = std::min(1 << i, 8);
    const int co = b * mult;
    const int stride = i < cfg.n_layers ? 2 : 1;
    const bool first = i == 0;
    d.convs.push_back(nn::make_conv(prev, co, 4, 4, stride, stride, first, kGanInitStd, rng));
    if (!first) d.norms.push_back(nn::make_instance_norm(co));
    d.strides.push_back(stride);
    prev = co;
  }
  d.convs.push_back(nn::make_conv(prev, 1, 4, 4, 1, 1, true, kGanInitStd, rng));
  d.strides.push_back(1);
  return d;
}

int PatchDiscriminator::receptive_field() const {
  int rf = 1, jump = 1;
  for (int s : strides) {
    rf += 3 * jump;  // kernel 4
    jump *= s;
  }
  return rf;
}

Var PatchDiscriminator::forward(const Var& x) const {
  LL_CHECK(x->value.ndim() == 4 && x->value.size(1) == cfg.in_channels,
           "PatchDiscriminator: input must be [N,C,H,W] with configured channels");
  int sh = x->value.size(2), sw = x->value.size(3);
  for (int s : strides) {
    LL_CHECK(sh >= 2 && sw >= 2, "PatchDiscriminator: image smaller than one patch");
    sh = (sh + 2 - 4) / s + 1;
    sw = (sw + 2 - 4) / s + 1;
  }
  Var h = x;
  size_t norm_idx = 0;
  for (size_t i = 0; i < convs.size(); ++i) {
    h = convs[i](ops::pad2d(h, 1, 1, 1, 1, ops::PadMode::kZero));
    const bool last = i + 1 == convs.size();
    if (last) {
      h = ops::sigmoid_v(h);
    } else {
      if (i > 0) h = norms[norm_idx++](h);
      h = ops::leaky_relu(h, 0.2);
    }
  }
  return h;
}

nn::ParamList PatchDiscriminator::params(const std::string& prefix) const {
  nn::ParamList out;
  size_t norm_idx = 0;
  for (size_t i = 0; i < convs.size(); ++i) {
    convs[i].collect(prefix + ".conv" + std::to_string(i), out);
    if (i > 0 && i + 1 < convs.size())
      norms[norm_idx++].collect(prefix + ".norm" + std::to_string(i), out);
  }
  return out;
}

Tensor discriminator_forward(const PatchDiscriminator& d, const Image& img) {
  Var x = make_leaf(image_to_tensor(img), false);
  return d.forward(x)->value;
}

AdvLoss adversarial_loss(const Var& d_real_scores, const Var& d_fake_scores, real eps) {
  AdvLoss out;
  out.loss_d = ops::add(ops::bce_loss_const(d_real_scores, 1, eps),
                        ops::bce_loss_const(d_fake_scores, 0, eps));
  out.loss_g = ops::bce_loss_const(d_fake_scores, 1, eps);
  return out;
}

std::pair<real, real> adversarial_loss(const Tensor& d_real_scores, const Tensor& d_fake_scores,
                                       real eps) {
  AdvLoss l = adversarial_loss(ops::constant(d_real_scores), ops::constant(d_fake_scores), eps);
  return {l.loss_d->value.item(), l.loss_g->value.item()};
}

AdvLoss adversarial_loss_lsq(const Var& d_real_scores, const Var& d_fake_scores) {
  AdvLoss out;
  out.loss_d =
      ops::add(ops::mse_loss_const(d_real_scores, 1), ops::mse_loss_const(d_fake_scores, 0));
  out.loss_g = ops::mse_loss_const(d_fake_scores, 1);
  return out;
}

Var cycle_loss(const Var& x, const Var& x_rec, const Var& y, const Var& y_rec) {
  LL_CHECK(x->value.same_shape(x_rec->value) && y->value.same_shape(y_rec->value),
           "cycle_loss: shape mismatch");
  return ops::add(ops::l1_loss(x_rec, x), ops::l1_loss(y_rec, y));
}

real cycle_loss(const Tensor& x, const Tensor& x_rec, const Tensor& y, const Tensor& y_rec) {
  return cycle_loss(ops::constant(x), ops::constant(x_rec), ops::constant(y),
                    ops::constant(y_rec))
      ->value.item();
}

real total_loss(const LossParts& parts, const LossWeights& weights) {
  LL_CHECK(weights.lambda_cyc >= 0, "total_loss: lambda_cyc must be >= 0");
  return parts.adv_a + parts.adv_b + weights.lambda_cyc * parts.cyc;
}

Tensor ImagePool::query(const Tensor& fake, std::mt19937_64& rng) {
  if (capacity_ == 0) return fake;
  if (static_cast<int>(items_.size()) < capacity_) {
    items_.push_back(fake);
    return fake;
  }
  if (uniform_real(rng, 0, 1) < 0.5) return fake;
  const int idx = uniform_int(rng, 0, capacity_ - 1);
  Tensor out = items_[static_cast<size_t>(idx)];
  items_[static_cast<size_t>(idx)] = fake;
  return out;
}

void ImagePool::set_items(std::vector<Tensor> items) {
  LL_CHECK(static_cast<int>(items.size()) <= capacity_, "ImagePool: too many items");
  items_ = std::move(items);
}

void to_json(nlohmann::json& j, const GanTrainConfig& c) {
  j = nlohmann::json{
      {"gen",
       {{"in_channels", c.gen.in_channels},
        {"base_channels", c.gen.base_channels},
        {"downsample_stages", c.gen.downsample_stages},
        {"residual_blocks", c.gen.residual_blocks}}},
      {"disc",
       {{"in_channels", c.disc.in_channels},
        {"base_channels", c.disc.base_channels},
        {"n_layers", c.disc.n_layers}}},
      {"lambda_cyc", c.weights.lambda_cyc},
      {"lr", c.lr},
      {"beta1", c.beta1},
      {"beta2", c.beta2},
      {"pool_capacity", c.pool_capacity},
      {"least_squares_adv", c.least_squares_adv},
      {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, GanTrainConfig& c) {
  const auto& g = j.at("gen");
  c.gen.in_channels = g.at("in_channels").get<int>();
  c.gen.base_channels = g.at("base_channels").get<int>();
  c.gen.downsample_stages = g.at("downsample_stages").get<int>();
  c.gen.residual_blocks = g.at("residual_blocks").get<int>();
  const auto& d = j.at("disc");
  c.disc.in_channels = d.at("in_channels").get<int>();
  c.disc.base_channels = d.at("base_channels").get<int>();
  c.disc.n_layers = d.at("n_layers").get<int>();
  c.weights.lambda_cyc = j.at("lambda_cyc").get<real>();
  c.lr = j.at("lr").get<real>();
  c.beta1 = j.at("beta1").get<real>();
  c.beta2 = j.at("beta2").get<real>();
  c.pool_capacity = j.at("pool_capacity").get<int>();
  c.least_squares_adv = j.value("least_squares_adv", false);
  c.seed = j.at("seed").get<uint64_t>();
}

GanBundle make_gan_bundle(const GanTrainConfig& cfg) {
  GanBundle b;
  b.cfg = cfg;
  auto rng_ga = make_rng(cfg.seed, 1);
  auto rng_gb = make_rng(cfg.seed, 2);
  auto rng_da = make_rng(cfg.seed, 3);
  auto rng_db = make_rng(cfg.seed, 4);
  b.g_a = make_generator(cfg.gen, rng_ga);
  b.g_b = make_generator(cfg.gen, rng_gb);
  b.d_a = make_discriminator(cfg.disc, rng_da);
  b.d_b = make_discriminator(cfg.disc, rng_db);
  b.pool_a = ImagePool(cfg.pool_capacity);
  b.pool_b = ImagePool(cfg.pool_capacity);
  nn::ParamList gp = b.g_a.params("g_a");
  for (auto& np : b.g_b.params("g_b")) gp.push_back(np);
  nn::ParamList dp = b.d_a.params("d_a");
  for (auto& np : b.d_b.params("d_b")) dp.push_back(np);
  b.opt_g = nn::Adam(std::move(gp), cfg.lr, cfg.beta1, cfg.beta2);
  b.opt_d = nn::Adam(std::move(dp), cfg.lr, cfg.beta1, cfg.beta2);
  b.rng = make_rng(cfg.seed, 5);
  return b;
}

GanLossRecord gan_training_step(GanBundle& bundle, const std::vector<Tensor>& batch_x,
                                const std::vector<Tensor>& batch_y, const LossWeights& weights) {
  LL_CHECK(!batch_x.empty() && !batch_y.empty(), "gan_training_step: empty batch");
  LL_CHECK(batch_x.size() == batch_y.size(), "gan_training_step: domain batch sizes differ");
  const size_t n = batch_x.size();
  GanLossRecord rec;

  // Generators first; discriminators frozen so their weights take no grads.
  nn::set_requires_grad(bundle.opt_d.params, false);
  bundle.opt_g.zero_grad();
  std::vector<Tensor> fakes_x, fakes_y;
  for (size_t i = 0; i < n; ++i) {
    Var x = make_leaf(batch_x[i]);
    Var y = make_leaf(batch_y[i]);
    Var fake_y = bundle.g_a.forward(x);
    Var rec_x = bundle.g_b.forward(fake_y);
    Var fake_x = bundle.g_b.forward(y);
    Var rec_y = bundle.g_a.forward(fake_x);
    const bool lsq = bundle.cfg.least_squares_adv;
    Var db_fake = bundle.d_b.forward(fake_y);
    Var da_fake = bundle.d_a.forward(fake_x);
    Var adv_a = lsq ? ops::mse_loss_const(db_fake, 1) : ops::bce_loss_const(db_fake, 1, kScoreEps);
    Var adv_b = lsq ? ops::mse_loss_const(da_fake, 1) : ops::bce_loss_const(da_fake, 1, kScoreEps);
    Var cyc = cycle_loss(x, rec_x, y, rec_y);
    Var g_total = ops::add(ops::add(adv_a, adv_b), ops::scale(cyc, weights.lambda_cyc));
    backward(g_total);
    rec.adv_g_a += adv_a->value.item();
    rec.adv_g_b += adv_b->value.item();
    rec.cyc += cyc->value.item();
    rec.g_total += g_total->value.item();
    fakes_y.push_back(fake_y->value);
    fakes_x.push_back(fake_x->value);
  }
  bundle.opt_g.step();
  bundle.opt_g.zero_grad();
  nn::set_requires_grad(bundle.opt_d.params, true);

  // Discriminators against reals and pool-mixed fakes.
  bundle.opt_d.zero_grad();
  for (size_t i = 0; i < n; ++i) {
    const Tensor pool_fake_y = bundle.pool_b.query(fakes_y[i], bundle.rng);
    const Tensor pool_fake_x = bundle.pool_a.query(fakes_x[i], bundle.rng);
    const bool lsq = bundle.cfg.least_squares_adv;
    Var db_real = bundle.d_b.forward(make_leaf(batch_y[i]));
    Var db_fake = bundle.d_b.forward(ops::constant(pool_fake_y));
    Var da_real = bundle.d_a.forward(make_leaf(batch_x[i]));
    Var da_fake = bundle.d_a.forward(ops::constant(pool_fake_x));
    Var loss_d_b = (lsq ? adversarial_loss_lsq(db_real, db_fake)
                        : adversarial_loss(db_real, db_fake, kScoreEps))
                       .loss_d;
    Var loss_d_a = (lsq ? adversarial_loss_lsq(da_real, da_fake)
                        : adversarial_loss(da_real, da_fake, kScoreEps))
                       .loss_d;
    backward(loss_d_b);
    backward(loss_d_a);
    rec.d_b += loss_d_b->value.item();
    rec.d_a += loss_d_a->value.item();
  }
  bundle.opt_d.step();
  bundle.opt_d.zero_grad();

  const real inv = real(1) / static_cast<real>(n);
  rec.adv_g_a *= inv;
  rec.adv_g_b *= inv;
  rec.cyc *= inv;
  rec.g_total *= inv;
  rec.d_a *= inv;
  rec.d_b *= inv;
  return rec;
}

namespace {

void put_params(TensorArchive& a, const nn::ParamList& ps) {
  for (const auto& np : ps) a.put(np.name, np.p->value);
}

void put_adam(TensorArchive& a, const std::string& prefix, const nn::Adam& opt) {
  for (size_t i = 0; i < opt.params.size(); ++i) {
    a.put(prefix + ".m." + opt.params[i].name, opt.m[i]);
    a.put(prefix + ".v." + opt.params[i].name, opt.v[i]);
  }
}

void load_params(const TensorArchive& a, const nn::ParamList& ps) {
  for (const auto& np : ps) {
    const Tensor& t = a.get(np.name);
    LL_REQUIRE(t.same_shape(np.p->value), "checkpoint shape mismatch at " + np.name);
    np.p->value = t;
  }
}

void load_adam(const TensorArchive& a, const std::string& prefix, nn::Adam& opt) {
  for (size_t i = 0; i < opt.params.size(); ++i) {
    opt.m[i] = a.get(prefix + ".m." + opt.params[i].name);
    opt.v[i] = a.get(prefix + ".v." + opt.params[i].name);
  }
}

}  // namespace

void save_gan_checkpoint(const GanBundle& bundle, const std::string& path) {
  TensorArchive a;
  a.meta["format"] = "lightlane.gan.v1";
  a.meta["epoch"] = bundle.epoch;
  a.meta["config"] = bundle.cfg;
  std::ostringstream rs;
  rs << bundle.rng;
  a.meta["rng"] = rs.str();
  a.meta["opt_g_t"] = bundle.opt_g.t;
  a.meta["opt_d_t"] = bundle.opt_d.t;
  put_params(a, bundle.opt_g.params);
  put_params(a, bundle.opt_d.params);
  put_adam(a, "opt_g", bundle.opt_g);
  put_adam(a, "opt_d", bundle.opt_d);
  a.meta["pool_a_size"] = bundle.pool_a.items().size();
  a.meta["pool_b_size"] = bundle.pool_b.items().size();
  for (size_t i = 0; i < bundle.pool_a.items().size(); ++i)
    a.put("pool_a." + std::to_string(i), bundle.pool_a.items()[i]);
  for (size_t i = 0; i < bundle.pool_b.items().size(); ++i)
    a.put("pool_b." + std::to_string(i), bundle.pool_b.items()[i]);
  a.save(path);
}

GanBundle load_gan_checkpoint(const std::string& path) {
  TensorArchive a = TensorArchive::load(path);
  LL_REQUIRE(a.meta.value("format", "") == "lightlane.gan.v1",
             "not a translator checkpoint: " + path);
  GanTrainConfig cfg = a.meta.at("config").get<GanTrainConfig>();
  GanBundle b = make_gan_bundle(cfg);
  b.epoch = a.meta.at("epoch").get<int64_t>();
  load_params(a, b.opt_g.params);
  load_params(a, b.opt_d.params);
  load_adam(a, "opt_g", b.opt_g);
  load_adam(a, "opt_d", b.opt_d);
  b.opt_g.t = a.meta.at("opt_g_t").get<int64_t>();
  b.opt_d.t = a.meta.at("opt_d_t").get<int64_t>();
  std::vector<Tensor> pa, pb;
  for (size_t i = 0; i < a.meta.at("pool_a_size").get<size_t>(); ++i)
    pa.push_back(a.get("pool_a." + std::to_string(i)));
  for (size_t i = 0; i < a.meta.at("pool_b_size").get<size_t>(); ++i)
    pb.push_back(a.get("pool_b." + std::to_string(i)));
  b.pool_a.set_items(std::move(pa));
  b.pool_b.set_items(std::move(pb));
  std::istringstream rs(a.meta.at("rng").get<std::string>());
  rs >> b.rng;
  LL_REQUIRE(!rs.fail(), "corrupt rng state in " + path);
  return b;
}

}  // namespace lightlane
