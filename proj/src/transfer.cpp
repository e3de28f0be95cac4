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

#include "lightlane/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "lightlane/image_io.hpp"
#include "lightlane/random.hpp"

namespace lightlane {

namespace fs = std::filesystem;

void to_json(nlohmann::json& j, const TransferTrainConfig& c) {
  j = nlohmann::json{{"gan", c.gan},         {"epochs", c.epochs},
                     {"batch", c.batch},     {"resize_h", c.resize_h},
                     {"resize_w", c.resize_w}, {"checkpoint_dir", c.checkpoint_dir},
                     {"log_path", c.log_path}};
}

void from_json(const nlohmann::json& j, TransferTrainConfig& c) {
  c.gan = j.at("gan").get<GanTrainConfig>();
  c.epochs = j.at("epochs").get<int>();
  c.batch = j.at("batch").get<int>();
  c.resize_h = j.at("resize_h").get<int>();
  c.resize_w = j.at("resize_w").get<int>();
  c.checkpoint_dir = j.value("checkpoint_dir", "");
  c.log_path = j.value("log_path", "");
}

namespace {

std::vector<Tensor> load_domain_images(const DomainDataset& d, int resize_h, int resize_w) {
  std::vector<Tensor> out;
  size_t skipped = 0;
  for (const auto& e : d.entries) {
    try {
      Image img = load_image_rgb(e.image_path);
      if (resize_h > 0 && resize_w > 0) img = resize_bilinear(img, resize_h, resize_w);
      out.push_back(image_to_tensor(img));
    } catch (const std::exception& ex) {
      ++skipped;
      std::cerr << "warning: skipping " << e.image_path << ": " << ex.what() << "\n";
    }
  }
  LL_REQUIRE(skipped * 10 <= d.entries.size(),
             "more than 10% of domain images unreadable (" + std::to_string(skipped) + "/" +
                 std::to_string(d.entries.size()) + ")");
  LL_REQUIRE(!out.empty(), "no readable images in domain");
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

GanBundle train_transfer(const TransferTrainConfig& cfg, const DomainDataset& domain_x,
                         const DomainDataset& domain_y) {
  LL_CHECK(!domain_x.entries.empty() && !domain_y.entries.empty(),
           "train_transfer: both domains must be non-empty");
  LL_CHECK(cfg.epochs >= 0 && cfg.batch >= 1, "train_transfer: bad epochs/batch");

  const std::vector<Tensor> imgs_x = load_domain_images(domain_x, cfg.resize_h, cfg.resize_w);
  const std::vector<Tensor> imgs_y = load_domain_images(domain_y, cfg.resize_h, cfg.resize_w);

  GanBundle bundle = make_gan_bundle(cfg.gan);

  std::ofstream log;
  if (!cfg.log_path.empty()) {
    log.open(cfg.log_path);
    LL_REQUIRE(log.good(), "cannot open log: " + cfg.log_path);
  }
  if (!cfg.checkpoint_dir.empty()) fs::create_directories(cfg.checkpoint_dir);

  const size_t nx = imgs_x.size(), ny = imgs_y.size();
  const size_t per_epoch = std::max(nx, ny);
  const size_t steps = (per_epoch + static_cast<size_t>(cfg.batch) - 1) /
                       static_cast<size_t>(cfg.batch);

  std::vector<size_t> order_x(nx), order_y(ny);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order_x.begin(), order_x.end(), size_t{0});
    std::iota(order_y.begin(), order_y.end(), size_t{0});
    auto rng_x = make_rng(cfg.gan.seed, 200 + static_cast<uint64_t>(epoch));
    auto rng_y = make_rng(cfg.gan.seed, 300 + static_cast<uint64_t>(epoch));
    std::shuffle(order_x.begin(), order_x.end(), rng_x);
    std::shuffle(order_y.begin(), order_y.end(), rng_y);

    GanLossRecord sum;
    for (size_t s = 0; s < steps; ++s) {
      std::vector<Tensor> bx, by;
      for (int k = 0; k < cfg.batch; ++k) {
        const size_t i = s * static_cast<size_t>(cfg.batch) + static_cast<size_t>(k);
        if (i >= per_epoch) break;
        bx.push_back(imgs_x[order_x[i % nx]]);
        by.push_back(imgs_y[order_y[i % ny]]);
      }
      const GanLossRecord r = gan_training_step(bundle, bx, by, cfg.gan.weights);
      sum.adv_g_a += r.adv_g_a;
      sum.adv_g_b += r.adv_g_b;
      sum.cyc += r.cyc;
      sum.g_total += r.g_total;
      sum.d_a += r.d_a;
      sum.d_b += r.d_b;
    }
    bundle.epoch = epoch + 1;

    const real inv = real(1) / static_cast<real>(steps);
    if (log.is_open()) {
      nlohmann::json j{{"epoch", epoch + 1},      {"adv_g_a", sum.adv_g_a * inv},
                       {"adv_g_b", sum.adv_g_b * inv}, {"cyc", sum.cyc * inv},
                       {"g_total", sum.g_total * inv}, {"d_a", sum.d_a * inv},
                       {"d_b", sum.d_b * inv}};
      log << j.dump() << "\n";
      log.flush();
    }
    if (!cfg.checkpoint_dir.empty()) {
      char name[32];
      std::snprintf(name, sizeof(name), "gan_epoch%03d.ckpt", epoch + 1);
      save_gan_checkpoint(bundle, (fs::path(cfg.checkpoint_dir) / name).string());
    }
  }
  return bundle;
}

TransferManifest transfer_batch(const GanBundle& bundle, const DomainDataset& sources,
                                const std::string& out_dir) {
  fs::create_directories(out_dir);
  TransferManifest m;
  m.checkpoint_id = "gan.seed" + std::to_string(bundle.cfg.seed) + ".epoch" +
                    std::to_string(bundle.epoch);
  m.timestamp = utc_timestamp();
  int index = 0;
  for (const auto& e : sources.entries) {
    TransferRecord rec;
    rec.source = e.image_path;
    rec.label = e.seg_label_path;
    char prefix[16];
    std::snprintf(prefix, sizeof(prefix), "%05d_", index++);
    const std::string out_path =
        (fs::path(out_dir) / (prefix + fs::path(e.image_path).stem().string() + ".png")).string();
    try {
      const Image src = load_image_rgb(e.image_path);
      const Image gen = generator_forward(bundle.g_a, src);
      save_image_rgb(out_path, gen);
      rec.generated = out_path;
    } catch (const std::exception& ex) {
      std::cerr << "warning: transfer skipped " << e.image_path << ": " << ex.what() << "\n";
      rec.generated = "-";
    }
    m.records.push_back(std::move(rec));
  }
  return m;
}

void write_manifest(const TransferManifest& m, const std::string& path) {
  std::ofstream f(path);
  LL_REQUIRE(f.good(), "cannot write manifest: " + path);
  f << "# checkpoint: " << m.checkpoint_id << "\n";
  f << "# timestamp: " << m.timestamp << "\n";
  for (const auto& r : m.records) f << r.source << "\t" << r.generated << "\t" << r.label << "\n";
  LL_REQUIRE(f.good(), "write failed: " + path);
}

TransferManifest load_manifest(const std::string& path) {
  std::ifstream f(path);
  LL_REQUIRE(f.good(), "cannot read manifest: " + path);
  TransferManifest m;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto read_header = [&](const std::string& key) -> std::string {
        const size_t pos = line.find(key);
        if (pos == std::string::npos) return {};
        std::string v = line.substr(pos + key.size());
        const size_t a = v.find_first_not_of(" \t");
        return a == std::string::npos ? std::string{} : v.substr(a);
      };
      if (auto v = read_header("checkpoint:"); !v.empty()) m.checkpoint_id = v;
      if (auto v = read_header("timestamp:"); !v.empty()) m.timestamp = v;
      continue;
    }
    std::istringstream ss(line);
    TransferRecord r;
    if (!(std::getline(ss, r.source, '\t') && std::getline(ss, r.generated, '\t') &&
          std::getline(ss, r.label)))
      throw PipelineError("malformed manifest row at " + path + ":" + std::to_string(lineno));
    m.records.push_back(std::move(r));
  }
  return m;
}

// A lane slot counts as present when its class paints at least two rows.
std::vector<int> existence_from_label_mask(const std::string& path, int lane_slots) {
  const Image mask = load_label_mask(path);
  std::vector<int> rows(static_cast<size_t>(lane_slots), 0);
  for (int y = 0; y < mask.height; ++y) {
    std::vector<bool> seen(static_cast<size_t>(lane_slots), false);
    for (int x = 0; x < mask.width; ++x) {
      const int cls = static_cast<int>(std::lround(mask.at(0, y, x)));
      if (cls >= 1 && cls <= lane_slots && !seen[static_cast<size_t>(cls - 1)]) {
        seen[static_cast<size_t>(cls - 1)] = true;
        ++rows[static_cast<size_t>(cls - 1)];
      }
    }
  }
  std::vector<int> flags(static_cast<size_t>(lane_slots), 0);
  for (int l = 0; l < lane_slots; ++l) flags[static_cast<size_t>(l)] = rows[static_cast<size_t>(l)] >= 2;
  return flags;
}

std::vector<ListEntry> build_augmented_trainset(const DomainDataset& real_pool,
                                                const TransferManifest& manifest, real ratio_n,
                                                uint64_t seed, const std::string& out_path,
                                                int64_t real_low_light_count) {
  LL_CHECK(ratio_n > 0, "build_augmented_trainset: ratio_n must be > 0");
  LL_CHECK(!manifest.records.empty(), "build_augmented_trainset: empty manifest");
  LL_CHECK(!real_pool.entries.empty(), "build_augmented_trainset: empty real pool");

  const int lane_slots = static_cast<int>(real_pool.entries.front().existence.size());
  for (const auto& e : real_pool.entries)
    LL_REQUIRE(!e.seg_label_path.empty() &&
                   static_cast<int>(e.existence.size()) == lane_slots && lane_slots > 0,
               "real entry lacks labels: " + e.image_path);

  int64_t base = real_low_light_count;
  if (base < 0) {
    if (real_pool.domain_tag == DomainTag::kLowLight) {
      base = static_cast<int64_t>(real_pool.entries.size());
    } else {
      base = 0;
      for (const auto& e : real_pool.entries) {
        std::string c = e.category;
        std::transform(c.begin(), c.end(), c.begin(), [](unsigned char ch) {
          return static_cast<char>(std::tolower(ch));
        });
        if (c.find("dark") != std::string::npos || c.find("night") != std::string::npos) ++base;
      }
      if (base == 0) base = static_cast<int64_t>(real_pool.entries.size());
    }
  }

  std::vector<const TransferRecord*> usable;
  for (const auto& r : manifest.records)
    if (!r.skipped()) usable.push_back(&r);

  const int64_t want = std::llround(ratio_n * static_cast<real>(base));
  LL_REQUIRE(want <= static_cast<int64_t>(usable.size()),
             "ratio " + std::to_string(ratio_n) + " needs " + std::to_string(want) +
                 " generated entries but only " + std::to_string(usable.size()) +
                 " are available");

  auto rng = make_rng(seed, 42);
  std::vector<const TransferRecord*> picked;
  std::sample(usable.begin(), usable.end(), std::back_inserter(picked),
              static_cast<size_t>(want), rng);

  std::vector<ListEntry> out = real_pool.entries;
  for (const TransferRecord* r : picked) {
    ListEntry e;
    e.image_path = r->generated;
    e.seg_label_path = r->label;
    e.existence = existence_from_label_mask(r->label, lane_slots);
    out.push_back(std::move(e));
  }
  if (!out_path.empty()) write_train_list(out_path, out);
  return out;
}

}  // namespace lightlane
