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

#include "lightlane/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

extern char** environ;

namespace lightlane {

void to_json(nlohmann::json& j, const DecodeConfig& c) {
  j = nlohmann::json{{"exist_thresh", c.exist_thresh},
                     {"row_stride", c.row_stride},
                     {"row_prob_floor", c.row_prob_floor}};
}

void from_json(const nlohmann::json& j, DecodeConfig& c) {
  c.exist_thresh = j.at("exist_thresh").get<real>();
  c.row_stride = j.at("row_stride").get<int>();
  c.row_prob_floor = j.at("row_prob_floor").get<real>();
}

void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json{{"profile", c.profile},
                     {"seed", c.seed},
                     {"out_dir", c.out_dir},
                     {"domain_x_list", c.domain_x_list},
                     {"domain_y_list", c.domain_y_list},
                     {"train_list", c.train_list},
                     {"val_list", c.val_list},
                     {"test_list", c.test_list},
                     {"category_index", c.category_index},
                     {"gan_checkpoint", c.gan_checkpoint},
                     {"detector_checkpoint", c.detector_checkpoint},
                     {"manifest", c.manifest},
                     {"ratio_n", c.ratio_n},
                     {"ratio_sweep", c.ratio_sweep},
                     {"transfer", c.transfer},
                     {"detector", c.detector},
                     {"eval", c.eval},
                     {"decode", c.decode},
                     {"synth", c.synth},
                     {"synth_count", c.synth_count}};
}

void from_json(const nlohmann::json& j, RunConfig& c) {
  c.profile = j.at("profile").get<std::string>();
  c.seed = j.at("seed").get<uint64_t>();
  c.out_dir = j.at("out_dir").get<std::string>();
  c.domain_x_list = j.at("domain_x_list").get<std::string>();
  c.domain_y_list = j.at("domain_y_list").get<std::string>();
  c.train_list = j.at("train_list").get<std::string>();
  c.val_list = j.at("val_list").get<std::string>();
  c.test_list = j.at("test_list").get<std::string>();
  c.category_index = j.at("category_index").get<std::string>();
  c.gan_checkpoint = j.at("gan_checkpoint").get<std::string>();
  c.detector_checkpoint = j.at("detector_checkpoint").get<std::string>();
  c.manifest = j.at("manifest").get<std::string>();
  c.ratio_n = j.at("ratio_n").get<real>();
  c.ratio_sweep = j.at("ratio_sweep").get<std::vector<real>>();
  c.transfer = j.at("transfer").get<TransferTrainConfig>();
  c.detector = j.at("detector").get<DetectorTrainConfig>();
  c.eval = j.at("eval").get<EvalConfig>();
  c.decode = j.at("decode").get<DecodeConfig>();
  c.synth = j.at("synth").get<SyntheticSceneConfig>();
  c.synth_count = j.at("synth_count").get<int>();
}

RunConfig default_config(const std::string& profile) {
  LL_CHECK(profile == "desk" || profile == "full", "unknown profile: " + profile);
  RunConfig c;
  c.profile = profile;
  c.seed = 7;
  if (profile == "desk") {
    c.transfer.gan.gen = {3, 8, 2, 2};
    c.transfer.gan.disc = {3, 8, 2};
    c.transfer.gan.seed = c.seed;
    c.transfer.epochs = 4;
    c.transfer.batch = 1;
    c.transfer.resize_h = 0;
    c.transfer.resize_w = 0;
    c.detector.net = {3, 4, 8, 2, 1, 16};
    c.detector.epochs = 6;
    c.detector.batch = 4;
    c.detector.seed = c.seed;
    c.eval.line_width = 6;
    c.eval.canvas_h = 64;
    c.eval.canvas_w = 128;
    c.decode.row_stride = 10;
    c.ratio_sweep = {0.25, 1, 4};
    c.synth.seed = c.seed;
    c.synth_count = 64;
  } else {
    c.transfer.gan.gen = {3, 64, 2, 9};
    c.transfer.gan.disc = {3, 64, 3};
    c.transfer.gan.seed = c.seed;
    c.transfer.epochs = 100;
    c.transfer.batch = 1;
    c.transfer.resize_h = 295;
    c.transfer.resize_w = 820;
    c.detector.net = {3, 4, 16, 3, 2, 32};
    c.detector.epochs = 12;
    c.detector.batch = 12;
    c.detector.resize_h = 295;
    c.detector.resize_w = 820;
    c.detector.seed = c.seed;
    c.eval.line_width = 30;
    c.eval.canvas_h = 590;
    c.eval.canvas_w = 1640;
    c.ratio_sweep = {0.25, 0.5, 1, 2, 4};
    c.synth.seed = c.seed;
    c.synth_count = 64;
  }
  return c;
}

void check_known_keys(const nlohmann::json& patch, const nlohmann::json& schema,
                      const std::string& prefix) {
  if (!patch.is_object()) return;
  for (const auto& [key, value] : patch.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    LL_REQUIRE(schema.is_object() && schema.contains(key), "unknown config key: " + path);
    if (value.is_object()) check_known_keys(value, schema.at(key), path);
  }
}

namespace {

nlohmann::json env_patch() {
  static const std::string kPrefix = "LIGHTLANE_";
  nlohmann::json patch = nlohmann::json::object();
  for (char** e = environ; *e; ++e) {
    const std::string var = *e;
    if (var.rfind(kPrefix, 0) != 0) continue;
    const size_t eq = var.find('=');
    if (eq == std::string::npos) continue;
    std::string name = var.substr(kPrefix.size(), eq - kPrefix.size());
    const std::string raw = var.substr(eq + 1);
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) {
      return static_cast<char>(std::tolower(ch));
    });
    nlohmann::json value = nlohmann::json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;

    nlohmann::json* node = &patch;
    size_t start = 0;
    for (size_t sep = name.find("__"); sep != std::string::npos;
         start = sep + 2, sep = name.find("__", start)) {
      nlohmann::json& child = (*node)[name.substr(start, sep - start)];
      if (!child.is_object()) child = nlohmann::json::object();
      node = &child;
    }
    (*node)[name.substr(start)] = value;
  }
  return patch;
}

RunConfig finalize(nlohmann::json base) {
  const nlohmann::json env = env_patch();
  check_known_keys(env, base);
  base.merge_patch(env);
  return base.get<RunConfig>();
}

}  // namespace

RunConfig load_run_config(const std::string& path, const std::string& profile_override) {
  std::ifstream f(path);
  LL_REQUIRE(f.good(), "cannot read config: " + path);
  nlohmann::json file_j;
  try {
    file_j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& ex) {
    throw PipelineError("invalid JSON in " + path + ": " + ex.what());
  }
  LL_REQUIRE(file_j.is_object(), "config root must be an object: " + path);

  const std::string profile = !profile_override.empty()
                                  ? profile_override
                                  : file_j.value("profile", std::string("desk"));
  nlohmann::json base;
  to_json(base, default_config(profile));
  check_known_keys(file_j, base);
  base.merge_patch(file_j);
  base["profile"] = profile;
  return finalize(std::move(base));
}

RunConfig config_from_profile(const std::string& profile) {
  nlohmann::json base;
  to_json(base, default_config(profile));
  return finalize(std::move(base));
}

}  // namespace lightlane
