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

#include "lightlane/evaluator.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "lightlane/datasets.hpp"

namespace lightlane {

namespace {

void fill_prf(CategoryCounts& c) {
  c.precision = c.tp + c.fp ? static_cast<real>(c.tp) / static_cast<real>(c.tp + c.fp) : 0;
  c.recall = c.tp + c.fn ? static_cast<real>(c.tp) / static_cast<real>(c.tp + c.fn) : 0;
  c.f1 = c.precision + c.recall
             ? 2 * c.precision * c.recall / (c.precision + c.recall)
             : 0;
}

}  // namespace

void to_json(nlohmann::json& j, const EvalConfig& c) {
  j = nlohmann::json{{"line_width", c.line_width},
                     {"iou_threshold", c.iou_threshold},
                     {"canvas_h", c.canvas_h},
                     {"canvas_w", c.canvas_w}};
}

void from_json(const nlohmann::json& j, EvalConfig& c) {
  c.line_width = j.at("line_width").get<int>();
  c.iou_threshold = j.at("iou_threshold").get<real>();
  c.canvas_h = j.at("canvas_h").get<int>();
  c.canvas_w = j.at("canvas_w").get<int>();
}

real lane_iou(const Polyline& pred, const Polyline& gt, const EvalConfig& cfg) {
  LL_CHECK(cfg.canvas_h >= 1 && cfg.canvas_w >= 1 && cfg.line_width >= 1,
           "lane_iou: bad EvalConfig");
  const Image a = rasterize_lane(pred, static_cast<real>(cfg.line_width), cfg.canvas_h,
                                 cfg.canvas_w);
  const Image b = rasterize_lane(gt, static_cast<real>(cfg.line_width), cfg.canvas_h,
                                 cfg.canvas_w);
  int64_t inter = 0, uni = 0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    const bool pa = a.data[i] > 0.5, pb = b.data[i] > 0.5;
    if (pa && pb) ++inter;
    if (pa || pb) ++uni;
  }
  return uni ? static_cast<real>(inter) / static_cast<real>(uni) : 0;
}

MatchResult match_lanes(const std::vector<Polyline>& preds, const std::vector<Polyline>& gts,
                        const EvalConfig& cfg) {
  const int p = static_cast<int>(preds.size());
  const int g = static_cast<int>(gts.size());
  LL_CHECK(p <= 32 && g <= 16, "match_lanes: too many lanes for exact matching");
  LL_CHECK(cfg.iou_threshold > 0 && cfg.iou_threshold <= 1, "match_lanes: bad threshold");

  std::vector<std::vector<real>> iou(static_cast<size_t>(p),
                                     std::vector<real>(static_cast<size_t>(g), 0));
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < g; ++j) iou[static_cast<size_t>(i)][static_cast<size_t>(j)] =
        lane_iou(preds[static_cast<size_t>(i)], gts[static_cast<size_t>(j)], cfg);

  // Exact max-cardinality (then max total IoU) assignment by DP over gt
  // subsets; choice[i][mask] records the gt matched to pred i-1 on the best
  // path reaching that state.
  const size_t masks = size_t{1} << g;
  struct State {
    int cnt = -1;
    real sum = 0;
  };
  std::vector<State> dp(masks), next(masks);
  std::vector<std::vector<int8_t>> choice(static_cast<size_t>(p),
                                          std::vector<int8_t>(masks, -2));
  dp[0] = {0, 0};
  for (int i = 0; i < p; ++i) {
    std::fill(next.begin(), next.end(), State{});
    for (size_t m = 0; m < masks; ++m) {
      if (dp[m].cnt < 0) continue;
      auto offer = [&](size_t nm, int cnt, real sum, int8_t pick) {
        if (cnt > next[nm].cnt || (cnt == next[nm].cnt && sum > next[nm].sum)) {
          next[nm] = {cnt, sum};
          choice[static_cast<size_t>(i)][nm] = pick;
        }
      };
      offer(m, dp[m].cnt, dp[m].sum, -1);
      for (int j = 0; j < g; ++j) {
        if (m & (size_t{1} << j)) continue;
        const real v = iou[static_cast<size_t>(i)][static_cast<size_t>(j)];
        if (v > cfg.iou_threshold)
          offer(m | (size_t{1} << j), dp[m].cnt + 1, dp[m].sum + v, static_cast<int8_t>(j));
      }
    }
    dp.swap(next);
  }

  size_t best_mask = 0;
  for (size_t m = 1; m < masks; ++m)
    if (dp[m].cnt > dp[best_mask].cnt ||
        (dp[m].cnt == dp[best_mask].cnt && dp[m].sum > dp[best_mask].sum))
      best_mask = m;

  MatchResult res;
  res.assignment.assign(static_cast<size_t>(p), -1);
  size_t m = best_mask;
  for (int i = p - 1; i >= 0; --i) {
    const int8_t pick = choice[static_cast<size_t>(i)][m];
    if (pick >= 0) {
      res.assignment[static_cast<size_t>(i)] = pick;
      m &= ~(size_t{1} << pick);
    }
  }
  res.tp = std::max(0, dp[best_mask].cnt);
  res.fp = p - res.tp;
  res.fn = g - res.tp;
  return res;
}

EvalReport evaluate_dataset(const std::string& pred_dir, const std::string& gt_dir,
                            const std::vector<std::pair<std::string, std::string>>& category_index,
                            const EvalConfig& cfg) {
  namespace fs = std::filesystem;
  std::map<std::string, std::array<int64_t, 3>> counts;
  for (const auto& [image, category] : category_index) {
    const std::string rel = lines_path_for(image);
    const fs::path gt_path = fs::path(gt_dir) / rel;
    LL_REQUIRE(fs::exists(gt_path), "missing ground truth: " + gt_path.string());
    const std::vector<Polyline> gts = parse_lines_file(gt_path.string()).lanes;
    const fs::path pred_path = fs::path(pred_dir) / rel;
    std::vector<Polyline> preds;
    if (fs::exists(pred_path)) preds = parse_lines_file(pred_path.string()).lanes;
    const MatchResult m = match_lanes(preds, gts, cfg);
    auto& c = counts[category];
    c[0] += m.tp;
    c[1] += m.fp;
    c[2] += m.fn;
  }

  EvalReport report;
  for (const auto& [category, c] : counts) {
    if (c[0] + c[2] == 0) {
      report.fp_only_categories[category] = c[1];
      continue;
    }
    CategoryCounts cc;
    cc.tp = c[0];
    cc.fp = c[1];
    cc.fn = c[2];
    fill_prf(cc);
    report.per_category[category] = cc;
    report.total.tp += c[0];
    report.total.fp += c[1];
    report.total.fn += c[2];
  }
  fill_prf(report.total);
  return report;
}

std::string format_report(const EvalReport& report) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-16s %8s %8s %8s %9s %9s %9s\n", "category", "tp", "fp",
                "fn", "precision", "recall", "f1");
  os << buf;
  auto row = [&](const std::string& name, const CategoryCounts& c) {
    std::snprintf(buf, sizeof(buf), "%-16s %8lld %8lld %8lld %8.1f%% %8.1f%% %8.1f%%\n",
                  name.c_str(), static_cast<long long>(c.tp), static_cast<long long>(c.fp),
                  static_cast<long long>(c.fn), 100.0 * c.precision, 100.0 * c.recall,
                  100.0 * c.f1);
    os << buf;
  };
  for (const auto& [name, c] : report.per_category) row(name, c);
  for (const auto& [name, fp] : report.fp_only_categories) {
    std::snprintf(buf, sizeof(buf), "%-16s %8s %8lld %8s  (FP only, excluded from total)\n",
                  name.c_str(), "-", static_cast<long long>(fp), "-");
    os << buf;
  }
  row("total", report.total);
  return os.str();
}

nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json j;
  auto enc = [](const CategoryCounts& c) {
    return nlohmann::json{{"tp", c.tp},       {"fp", c.fp},         {"fn", c.fn},
                          {"precision", c.precision}, {"recall", c.recall}, {"f1", c.f1}};
  };
  j["per_category"] = nlohmann::json::object();
  for (const auto& [name, c] : report.per_category) j["per_category"][name] = enc(c);
  j["fp_only_categories"] = nlohmann::json::object();
  for (const auto& [name, fp] : report.fp_only_categories) j["fp_only_categories"][name] = fp;
  j["total"] = enc(report.total);
  return j;
}

}  // namespace lightlane
