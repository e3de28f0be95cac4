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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lightlane/datasets.hpp"
#include "lightlane/image_io.hpp"
#include "lightlane/random.hpp"

namespace fs = std::filesystem;

namespace lightlane {

namespace {

struct SceneGeometry {
  int horizon = 0;
  std::vector<Polyline> slot_lanes;  // one per slot, present or not
  std::vector<int> present;          // per slot
  int lane_count = 0;
};

real lane_x(real vp_x, real x_bottom, real curv_px, real t) {
  return vp_x + (x_bottom - vp_x) * t + curv_px * t * (1 - t);
}

// All scene content (geometry, textures, clutter) is drawn from rng_geom so
// bright and dark renders of the same seed share it exactly. Only the light
// transform consumes rng_noise.
SceneGeometry make_geometry(const SyntheticSceneConfig& cfg, std::mt19937_64& rng) {
  const int h = cfg.canvas_h, w = cfg.canvas_w;
  SceneGeometry geo;
  geo.horizon = static_cast<int>(std::lround(h * uniform_real(rng, 0.26, 0.38)));
  const real vp_x = w * uniform_real(rng, 0.38, 0.62);
  const real spread = uniform_real(rng, 0.20, 0.27) * w;
  const real scene_curv = uniform_real(rng, cfg.curvature_min, cfg.curvature_max) * w * real(0.3);
  geo.lane_count = uniform_int(rng, cfg.min_lanes, cfg.max_lanes);
  const int start = cfg.lane_slots == geo.lane_count
                        ? 0
                        : uniform_int(rng, 0, cfg.lane_slots - geo.lane_count);
  geo.present.assign(static_cast<size_t>(cfg.lane_slots), 0);
  for (int s = start; s < start + geo.lane_count; ++s) geo.present[static_cast<size_t>(s)] = 1;

  const real t0 = 0.10;
  for (int s = 0; s < cfg.lane_slots; ++s) {
    const real offset = (s - (cfg.lane_slots - 1) / real(2)) * spread +
                        uniform_real(rng, -0.02, 0.02) * w;
    const real x_bottom = w / real(2) + offset;
    const real curv = scene_curv + uniform_real(rng, -0.04, 0.04) * w;
    Polyline lane;
    const int y_top = geo.horizon + std::max(1, static_cast<int>(std::lround(
                                                    t0 * (h - 1 - geo.horizon))));
    for (int y = y_top; y < h - 1; y += 3) {
      const real t = static_cast<real>(y - geo.horizon) / (h - 1 - geo.horizon);
      lane.points.emplace_back(lane_x(vp_x, x_bottom, curv, t), static_cast<real>(y));
    }
    lane.points.emplace_back(lane_x(vp_x, x_bottom, curv, 1), static_cast<real>(h - 1));
    geo.slot_lanes.push_back(std::move(lane));
  }
  return geo;
}

Image render_scene(const SyntheticSceneConfig& cfg, const SceneGeometry& geo,
                   std::mt19937_64& rng_geom, std::mt19937_64& rng_noise) {
  const int h = cfg.canvas_h, w = cfg.canvas_w;
  Image img(3, h, w);  // [0,1] until the final mapping

  for (int y = 0; y < geo.horizon; ++y) {
    const real lum = 0.60 + 0.15 * (1 - static_cast<real>(y) / std::max(1, geo.horizon));
    for (int x = 0; x < w; ++x) {
      img.at(0, y, x) = lum * 0.92;
      img.at(1, y, x) = lum * 0.96;
      img.at(2, y, x) = lum;
    }
  }
  for (int y = geo.horizon; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const real tex = uniform_real(rng_geom, -0.04, 0.04);
      img.at(0, y, x) = 0.20 + tex;
      img.at(1, y, x) = 0.30 + tex;
      img.at(2, y, x) = 0.16 + tex;
    }

  // Road bed between the outer slot curves.
  const Polyline& left_lane = geo.slot_lanes.front();
  const Polyline& right_lane = geo.slot_lanes.back();
  const int denom = std::max(1, h - 1 - geo.horizon);
  for (int y = geo.horizon; y < h; ++y) {
    const real t = static_cast<real>(y - geo.horizon) / denom;
    const size_t row = std::min(left_lane.points.size() - 1,
                                static_cast<size_t>(std::max(
                                    0, (y - static_cast<int>(left_lane.points.front().second)) / 3)));
    const real margin = (0.02 + 0.06 * t) * w;
    const real xl = left_lane.points[row].first - margin;
    const real xr = right_lane.points[row].first + margin;
    const int x0 = std::max(0, static_cast<int>(std::floor(xl)));
    const int x1 = std::min(w - 1, static_cast<int>(std::ceil(xr)));
    for (int x = x0; x <= x1; ++x) {
      const real lum = 0.34 + 0.10 * t + uniform_real(rng_geom, -0.02, 0.02);
      img.at(0, y, x) = lum;
      img.at(1, y, x) = lum;
      img.at(2, y, x) = lum;
    }
  }

  // Skyline clutter.
  const int n_clutter = uniform_int(rng_geom, 2, 5);
  for (int i = 0; i < n_clutter; ++i) {
    const int cx = uniform_int(rng_geom, 0, w - 1);
    const int cw = uniform_int(rng_geom, 3, 14);
    const int ch = uniform_int(rng_geom, 3, 12);
    const real lum = uniform_real(rng_geom, 0.15, 0.55);
    const int y1 = geo.horizon + 2;
    for (int y = std::max(0, y1 - ch); y < std::min(h, y1); ++y)
      for (int x = std::max(0, cx - cw / 2); x < std::min(w, cx + cw / 2 + 1); ++x) {
        img.at(0, y, x) = lum;
        img.at(1, y, x) = lum * 0.98;
        img.at(2, y, x) = lum * 0.96;
      }
  }

  // Lane markings.
  for (int s = 0; s < cfg.lane_slots; ++s) {
    if (!geo.present[static_cast<size_t>(s)]) continue;
    const Polyline& lane = geo.slot_lanes[static_cast<size_t>(s)];
    for (const auto& [px, py] : lane.points) {
      const int y = static_cast<int>(std::lround(py));
      if (y < 0 || y >= h) continue;
      const real t = static_cast<real>(y - geo.horizon) / denom;
      const real hw = 0.6 + 1.0 * t;
      const int x0 = std::max(0, static_cast<int>(std::floor(px - hw)));
      const int x1 = std::min(w - 1, static_cast<int>(std::ceil(px + hw)));
      for (int yy = y; yy < std::min(h, y + 3); ++yy)
        for (int x = x0; x <= x1; ++x) {
          if (std::abs(x - px) > hw) continue;
          img.at(0, yy, x) = 0.90;
          img.at(1, yy, x) = 0.88;
          img.at(2, yy, x) = 0.82;
        }
    }
  }

  const bool dark = cfg.light_domain == "dark";
  const real brightness = dark ? cfg.dark_brightness : cfg.bright_brightness;
  const real gamma = dark ? cfg.dark_gamma : cfg.bright_gamma;
  const real sigma = dark ? cfg.dark_noise_sigma : cfg.bright_noise_sigma;
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        real v = std::clamp(img.at(c, y, x), real(0), real(1));
        v = brightness * std::pow(v, gamma);
        if (sigma > 0) v += normal_real(rng_noise, 0, sigma);
        img.at(c, y, x) = 2 * std::clamp(v, real(0), real(1)) - 1;
      }
  return img;
}

}  // namespace

void to_json(nlohmann::json& j, const SyntheticSceneConfig& c) {
  j = nlohmann::json{{"canvas_h", c.canvas_h},
                     {"canvas_w", c.canvas_w},
                     {"lane_slots", c.lane_slots},
                     {"min_lanes", c.min_lanes},
                     {"max_lanes", c.max_lanes},
                     {"curvature_min", c.curvature_min},
                     {"curvature_max", c.curvature_max},
                     {"light_domain", c.light_domain},
                     {"bright_brightness", c.bright_brightness},
                     {"bright_gamma", c.bright_gamma},
                     {"bright_noise_sigma", c.bright_noise_sigma},
                     {"dark_brightness", c.dark_brightness},
                     {"dark_gamma", c.dark_gamma},
                     {"dark_noise_sigma", c.dark_noise_sigma},
                     {"label_width", c.label_width},
                     {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, SyntheticSceneConfig& c) {
  c.canvas_h = j.at("canvas_h").get<int>();
  c.canvas_w = j.at("canvas_w").get<int>();
  c.lane_slots = j.at("lane_slots").get<int>();
  c.min_lanes = j.at("min_lanes").get<int>();
  c.max_lanes = j.at("max_lanes").get<int>();
  c.curvature_min = j.at("curvature_min").get<real>();
  c.curvature_max = j.at("curvature_max").get<real>();
  c.light_domain = j.at("light_domain").get<std::string>();
  c.bright_brightness = j.at("bright_brightness").get<real>();
  c.bright_gamma = j.at("bright_gamma").get<real>();
  c.bright_noise_sigma = j.at("bright_noise_sigma").get<real>();
  c.dark_brightness = j.at("dark_brightness").get<real>();
  c.dark_gamma = j.at("dark_gamma").get<real>();
  c.dark_noise_sigma = j.at("dark_noise_sigma").get<real>();
  c.label_width = j.at("label_width").get<int>();
  c.seed = j.at("seed").get<uint64_t>();
}

DomainDataset synth_generate(const SyntheticSceneConfig& cfg, int n, const std::string& out_dir) {
  LL_CHECK(n >= 1, "synth_generate: n must be >= 1");
  LL_CHECK(cfg.light_domain == "bright" || cfg.light_domain == "dark",
           "synth_generate: light_domain must be bright or dark");
  LL_CHECK(cfg.min_lanes >= 1 && cfg.min_lanes <= cfg.max_lanes &&
               cfg.max_lanes <= cfg.lane_slots,
           "synth_generate: bad lane count range");
  fs::create_directories(fs::path(out_dir) / "images");
  fs::create_directories(fs::path(out_dir) / "labels");

  DomainDataset ds;
  ds.domain_tag =
      cfg.light_domain == "dark" ? DomainTag::kLowLight : DomainTag::kSuitableLight;
  ds.sampler_seed = cfg.seed;

  std::string list_text, cat_text;
  const uint64_t noise_stream = cfg.light_domain == "dark" ? 0x0dabcULL : 0x0b1abcULL;
  char name[64];
  for (int i = 0; i < n; ++i) {
    std::snprintf(name, sizeof(name), "scene_%05d", i);
    auto rng_geom = make_rng(cfg.seed, static_cast<uint64_t>(i));
    auto rng_noise = make_rng(derive_seed(cfg.seed, noise_stream), static_cast<uint64_t>(i));
    const SceneGeometry geo = make_geometry(cfg, rng_geom);
    const Image img = render_scene(cfg, geo, rng_geom, rng_noise);

    const std::string img_rel = std::string("images/") + name + ".png";
    const std::string lab_rel = std::string("labels/") + name + ".png";
    const std::string img_abs = (fs::path(out_dir) / img_rel).string();
    const std::string lab_abs = (fs::path(out_dir) / lab_rel).string();
    save_image_rgb(img_abs, img);

    Image seg(1, cfg.canvas_h, cfg.canvas_w);
    std::vector<Polyline> present_lanes;
    for (int s = 0; s < cfg.lane_slots; ++s) {
      if (!geo.present[static_cast<size_t>(s)]) continue;
      const Polyline& lane = geo.slot_lanes[static_cast<size_t>(s)];
      present_lanes.push_back(lane);
      const Image band =
          rasterize_lane(lane, cfg.label_width, cfg.canvas_h, cfg.canvas_w);
      for (int y = 0; y < cfg.canvas_h; ++y)
        for (int x = 0; x < cfg.canvas_w; ++x)
          if (band.at(0, y, x) != 0) seg.at(0, y, x) = static_cast<real>(s + 1);
    }
    save_label_mask(lab_abs, seg);

    std::ofstream lf(lines_path_for(img_abs));
    LL_REQUIRE(lf.good(), "cannot write annotation for " + img_abs);
    lf << lanes_to_lines_text(present_lanes);
    lf.close();

    ListEntry e;
    e.image_path = img_abs;
    e.seg_label_path = lab_abs;
    e.existence = geo.present;
    e.category = "lanes" + std::to_string(geo.lane_count);
    ds.entries.push_back(e);

    list_text += img_rel + " " + lab_rel;
    for (int f : geo.present) list_text += f ? " 1" : " 0";
    list_text += '\n';
    cat_text += img_rel + '\t' + e.category + '\n';
  }

  std::ofstream lf((fs::path(out_dir) / "list.txt").string());
  lf << list_text;
  std::ofstream cf((fs::path(out_dir) / "categories.txt").string());
  cf << cat_text;
  return ds;
}

}  // namespace lightlane
