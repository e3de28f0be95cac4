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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "lightlane/config.hpp"
#include "lightlane/image_io.hpp"
#include "lightlane/plotting.hpp"
#include "lightlane/postprocess.hpp"
#include "lightlane/random.hpp"

namespace {

using namespace lightlane;
namespace fs = std::filesystem;

struct GlobalArgs {
  std::string config;
  std::string profile;
  std::string out;
  int64_t seed = -1;
};

RunConfig resolve_config(const GlobalArgs& g) {
  RunConfig cfg = g.config.empty()
                      ? config_from_profile(g.profile.empty() ? "desk" : g.profile)
                      : load_run_config(g.config, g.profile);
  if (g.seed >= 0) {
    cfg.seed = static_cast<uint64_t>(g.seed);
    cfg.transfer.gan.seed = cfg.seed;
    cfg.detector.seed = cfg.seed;
    cfg.synth.seed = cfg.seed;
  }
  if (!g.out.empty()) cfg.out_dir = g.out;
  fs::create_directories(cfg.out_dir);
  return cfg;
}

void require_path(const std::string& path, const std::string& what) {
  LL_REQUIRE(!path.empty(), what + " not set (give a flag or config value)");
  LL_REQUIRE(fs::exists(path), what + " not found: " + path);
}

// Short ratio labels: 0.25 -> "0.25", 1 -> "1".
std::string format_ratio(double n) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", n);
  return buf;
}

std::string pick(const std::string& flag_value, const std::string& cfg_value,
                 const std::string& fallback) {
  if (!flag_value.empty()) return flag_value;
  if (!cfg_value.empty()) return cfg_value;
  return fallback;
}

void run_header(const RunConfig& cfg, const std::string& cmd, const std::string& extra) {
  std::cout << "[lightlane] cmd=" << cmd << " profile=" << cfg.profile << " seed=" << cfg.seed
            << " out=" << cfg.out_dir << "\n";
  if (!extra.empty()) std::cout << "[lightlane] " << extra << "\n";
}

// Domain list for GAN training: first whitespace token per line is the image
// path, resolved against the list's directory. Accepts both bare image lists
// and full training lists.
DomainDataset domain_from_list(const std::string& list_path, DomainTag tag) {
  require_path(list_path, "domain list");
  std::ifstream f(list_path);
  LL_REQUIRE(f.good(), "cannot read list: " + list_path);
  const fs::path base = fs::path(list_path).parent_path();
  DomainDataset d;
  d.domain_tag = tag;
  std::string line;
  while (std::getline(f, line)) {
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok)) continue;
    fs::path p(tok);
    if (p.is_relative()) p = base / p;
    ListEntry e;
    e.image_path = p.lexically_normal().string();
    d.entries.push_back(std::move(e));
  }
  LL_REQUIRE(!d.entries.empty(), "empty domain list: " + list_path);
  return d;
}

void write_text_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path);
  LL_REQUIRE(f.good(), "cannot write: " + path.string());
  f << text;
  LL_REQUIRE(f.good(), "write failed: " + path.string());
}

// Runs the detector over every image in the category index, writes one
// ".lines.txt" per image under pred_dir (mirroring the index layout), and
// scores against the ground truth next to the images.
EvalReport infer_and_score(const DetectorNet& net, int resize_h, int resize_w,
                           const DecodeConfig& dc, const EvalConfig& ec,
                           const std::vector<std::pair<std::string, std::string>>& index,
                           const std::string& gt_dir, const std::string& pred_dir) {
  for (const auto& [rel, category] : index) {
    const fs::path img_path = fs::path(gt_dir) / rel;
    require_path(img_path.string(), "test image");
    Image img = load_image_rgb(img_path.string());
    const int orig_h = img.height, orig_w = img.width;
    if (resize_h > 0 && resize_w > 0) img = resize_bilinear(img, resize_h, resize_w);
    const DetectorOutput out = detector_forward(net, img);
    DecodedLanes dec = decode_lanes(out, dc.exist_thresh, dc.row_stride, dc.row_prob_floor);
    if (img.height != orig_h || img.width != orig_w) {
      const real sx = static_cast<real>(orig_w) / img.width;
      const real sy = static_cast<real>(orig_h) / img.height;
      for (auto& [idx, line] : dec.lanes)
        for (auto& [x, y] : line.points) {
          x *= sx;
          y *= sy;
        }
    }
    write_text_file(fs::path(pred_dir) / lines_path_for(rel), lanes_to_culane_lines(dec));
  }
  return evaluate_dataset(pred_dir, gt_dir, index, ec);
}

int cmd_synth(const RunConfig& cfg_in, const std::string& domain, int count,
              const std::string& dir_flag) {
  RunConfig cfg = cfg_in;
  if (!domain.empty()) cfg.synth.light_domain = domain;
  const int n = count > 0 ? count : cfg.synth_count;
  const std::string dir =
      dir_flag.empty() ? (fs::path(cfg.out_dir) / ("synth_" + cfg.synth.light_domain)).string()
                       : dir_flag;
  run_header(cfg, "synth",
             "domain=" + cfg.synth.light_domain + " count=" + std::to_string(n) + " canvas=" +
                 std::to_string(cfg.synth.canvas_h) + "x" + std::to_string(cfg.synth.canvas_w));
  const DomainDataset d = synth_generate(cfg.synth, n, dir);
  std::cout << "wrote " << d.entries.size() << " scenes to " << dir << "\n";
  return 0;
}

int cmd_train_gan(const RunConfig& cfg_in, const std::string& x_flag, const std::string& y_flag,
                  int epochs_override) {
  RunConfig cfg = cfg_in;
  if (epochs_override >= 0) cfg.transfer.epochs = epochs_override;
  const std::string x_list = pick(x_flag, cfg.domain_x_list, "");
  const std::string y_list = pick(y_flag, cfg.domain_y_list, "");
  const DomainDataset dx = domain_from_list(x_list, DomainTag::kSuitableLight);
  const DomainDataset dy = domain_from_list(y_list, DomainTag::kLowLight);

  TransferTrainConfig t = cfg.transfer;
  t.checkpoint_dir = (fs::path(cfg.out_dir) / "gan_ckpts").string();
  t.log_path = (fs::path(cfg.out_dir) / "gan_train_log.jsonl").string();
  std::ostringstream hdr;
  hdr << "epochs=" << t.epochs << " batch=" << t.batch << " lr=" << t.gan.lr
      << " lambda_cyc=" << t.gan.weights.lambda_cyc << " adv="
      << (t.gan.least_squares_adv ? "lsq" : "log") << " resize=" << t.resize_h << "x"
      << t.resize_w << " |X|=" << dx.entries.size() << " |Y|=" << dy.entries.size();
  run_header(cfg, "train-gan", hdr.str());

  const GanBundle bundle = train_transfer(t, dx, dy);
  const std::string ckpt = (fs::path(cfg.out_dir) / "gan.ckpt").string();
  save_gan_checkpoint(bundle, ckpt);
  std::cout << "checkpoint: " << ckpt << "\nloss log: " << t.log_path << "\n";
  return 0;
}

int cmd_transfer(const RunConfig& cfg, const std::string& ckpt_flag,
                 const std::string& sources_flag) {
  const std::string ckpt = pick(ckpt_flag, cfg.gan_checkpoint,
                                (fs::path(cfg.out_dir) / "gan.ckpt").string());
  require_path(ckpt, "gan checkpoint");
  const std::string sources = pick(sources_flag, cfg.domain_x_list, "");
  require_path(sources, "source list");

  run_header(cfg, "transfer", "checkpoint=" + ckpt + " sources=" + sources);
  const GanBundle bundle = load_gan_checkpoint(ckpt);
  DomainDataset src;
  src.domain_tag = DomainTag::kSuitableLight;
  src.entries = load_train_list(sources, cfg.detector.net.lane_count);

  const std::string gen_dir = (fs::path(cfg.out_dir) / "generated").string();
  const TransferManifest manifest = transfer_batch(bundle, src, gen_dir);
  size_t skipped = 0;
  for (const auto& r : manifest.records)
    if (r.skipped()) ++skipped;
  const std::string manifest_path =
      pick("", cfg.manifest, (fs::path(cfg.out_dir) / "manifest.tsv").string());
  write_manifest(manifest, manifest_path);
  LL_REQUIRE(skipped * 10 <= manifest.records.size(),
             "more than 10% of sources failed (" + std::to_string(skipped) + "/" +
                 std::to_string(manifest.records.size()) + ")");
  std::cout << "generated " << (manifest.records.size() - skipped) << " images (" << skipped
            << " skipped)\nmanifest: " << manifest_path << "\n";
  return 0;
}

int cmd_train_detector(const RunConfig& cfg_in, const std::string& train_flag,
                       const std::string& val_flag, const std::string& manifest_flag,
                       double ratio_n, int epochs_override, int64_t low_light_count) {
  RunConfig cfg = cfg_in;
  if (epochs_override >= 0) cfg.detector.epochs = epochs_override;
  const std::string train_path = pick(train_flag, cfg.train_list, "");
  const std::string val_path = pick(val_flag, cfg.val_list, "");
  require_path(train_path, "train list");
  require_path(val_path, "val list");

  const int lanes = cfg.detector.net.lane_count;
  std::vector<ListEntry> train_entries = load_train_list(train_path, lanes);
  const std::vector<ListEntry> val_entries = load_train_list(val_path, lanes);

  const std::string manifest_path = pick(manifest_flag, cfg.manifest, "");
  std::string aug_note = "real-only";
  if (!manifest_path.empty()) {
    require_path(manifest_path, "transfer manifest");
    const TransferManifest manifest = load_manifest(manifest_path);
    DomainDataset pool;
    pool.domain_tag = DomainTag::kSuitableLight;
    pool.entries = train_entries;
    const real n = ratio_n > 0 ? static_cast<real>(ratio_n) : cfg.ratio_n;
    const std::string aug_path = (fs::path(cfg.out_dir) / "augmented_list.txt").string();
    train_entries =
        build_augmented_trainset(pool, manifest, n, cfg.seed, aug_path, low_light_count);
    aug_note = "augmented N=" + std::to_string(n) + " -> " + aug_path;
  }

  std::ostringstream hdr;
  hdr << "epochs=" << cfg.detector.epochs << " batch=" << cfg.detector.batch
      << " lr=" << cfg.detector.lr << " poly_power=" << cfg.detector.poly_power
      << " lambda_1=" << cfg.detector.loss_weights.lambda_1
      << " lambda_2=" << cfg.detector.loss_weights.lambda_2
      << " bg_weight=" << cfg.detector.bg_class_weight << " resize=" << cfg.detector.resize_h
      << "x" << cfg.detector.resize_w << " train=" << train_entries.size()
      << " val=" << val_entries.size() << " (" << aug_note << ")";
  run_header(cfg, "train-detector", hdr.str());

  const std::string log_path = (fs::path(cfg.out_dir) / "detector_train_log.jsonl").string();
  std::vector<DetectorEpochRecord> history;
  const DetectorBundle bundle =
      train_detector(cfg.detector, train_entries, val_entries, log_path, &history);
  const std::string ckpt = (fs::path(cfg.out_dir) / "detector.ckpt").string();
  save_detector_checkpoint(bundle, ckpt);
  if (!history.empty())
    std::cout << "final val mIoU=" << history.back().val_miou
              << " exist_acc=" << history.back().val_exist_acc << "\n";
  std::cout << "checkpoint: " << ckpt << "\nmetric log: " << log_path << "\n";
  return 0;
}

int cmd_evaluate(const RunConfig& cfg, const std::string& ckpt_flag,
                 const std::string& categories_flag, const std::string& gt_dir_flag) {
  const std::string ckpt = pick(ckpt_flag, cfg.detector_checkpoint,
                                (fs::path(cfg.out_dir) / "detector.ckpt").string());
  require_path(ckpt, "detector checkpoint");
  const std::string categories = pick(categories_flag, cfg.category_index, "");
  require_path(categories, "category index");
  const std::string gt_dir =
      gt_dir_flag.empty() ? fs::path(categories).parent_path().string() : gt_dir_flag;

  run_header(cfg, "evaluate",
             "checkpoint=" + ckpt + " categories=" + categories + " gt_dir=" + gt_dir);
  const DetectorBundle bundle = load_detector_checkpoint(ckpt);
  const auto index = load_category_index(categories);
  const std::string pred_dir = (fs::path(cfg.out_dir) / "pred").string();
  const EvalReport report =
      infer_and_score(bundle.net, cfg.detector.resize_h, cfg.detector.resize_w, cfg.decode,
                      cfg.eval, index, gt_dir, pred_dir);

  const std::string table = format_report(report);
  std::cout << table;
  write_text_file(fs::path(cfg.out_dir) / "report.txt", table);
  write_text_file(fs::path(cfg.out_dir) / "report.json", report_to_json(report).dump(2) + "\n");
  std::cout << "report: " << (fs::path(cfg.out_dir) / "report.json").string() << "\n";
  return 0;
}

int cmd_ablate_ratio(const RunConfig& cfg, const std::string& train_flag,
                     const std::string& val_flag, const std::string& manifest_flag,
                     const std::string& categories_flag, const std::string& gt_dir_flag,
                     std::vector<double> n_values, int64_t low_light_count) {
  if (n_values.empty())
    n_values.assign(cfg.ratio_sweep.begin(), cfg.ratio_sweep.end());
  LL_CHECK(!n_values.empty(), "no ratio values given");
  std::vector<double> ns;
  for (double n : n_values) {
    LL_CHECK(n > 0, "ratio values must be > 0");
    if (std::find(ns.begin(), ns.end(), n) != ns.end()) {
      std::cerr << "warning: duplicate ratio " << n << " ignored\n";
      continue;
    }
    ns.push_back(n);
  }

  const std::string train_path = pick(train_flag, cfg.train_list, "");
  const std::string val_path = pick(val_flag, cfg.val_list, "");
  const std::string manifest_path = pick(manifest_flag, cfg.manifest, "");
  const std::string categories = pick(categories_flag, cfg.category_index, "");
  require_path(train_path, "train list");
  require_path(val_path, "val list");
  require_path(manifest_path, "transfer manifest");
  require_path(categories, "category index");
  const std::string gt_dir =
      gt_dir_flag.empty() ? fs::path(categories).parent_path().string() : gt_dir_flag;

  std::ostringstream hdr;
  hdr << "sweep N={";
  for (size_t i = 0; i < ns.size(); ++i) hdr << (i ? "," : "") << ns[i];
  hdr << "} detector epochs=" << cfg.detector.epochs << " batch=" << cfg.detector.batch;
  run_header(cfg, "ablate-ratio", hdr.str());

  const int lanes = cfg.detector.net.lane_count;
  const std::vector<ListEntry> train_entries = load_train_list(train_path, lanes);
  const std::vector<ListEntry> val_entries = load_train_list(val_path, lanes);
  const TransferManifest manifest = load_manifest(manifest_path);
  const auto index = load_category_index(categories);

  std::vector<EvalReport> reports;
  for (size_t i = 0; i < ns.size(); ++i) {
    std::ostringstream tag;
    tag << "n" << ns[i];
    std::string dir_name = tag.str();
    std::replace(dir_name.begin(), dir_name.end(), '.', 'p');
    const fs::path run_dir = fs::path(cfg.out_dir) / "ablate" / dir_name;
    fs::create_directories(run_dir);

    DomainDataset pool;
    pool.domain_tag = DomainTag::kSuitableLight;
    pool.entries = train_entries;
    const std::vector<ListEntry> aug = build_augmented_trainset(
        pool, manifest, static_cast<real>(ns[i]), cfg.seed,
        (run_dir / "augmented_list.txt").string(), low_light_count);

    std::cout << "[lightlane] N=" << ns[i] << ": training on " << aug.size() << " entries\n";
    std::vector<DetectorEpochRecord> history;
    const DetectorBundle bundle = train_detector(
        cfg.detector, aug, val_entries, (run_dir / "detector_train_log.jsonl").string(),
        &history);
    save_detector_checkpoint(bundle, (run_dir / "detector.ckpt").string());

    const EvalReport report =
        infer_and_score(bundle.net, cfg.detector.resize_h, cfg.detector.resize_w, cfg.decode,
                        cfg.eval, index, gt_dir, (run_dir / "pred").string());
    write_text_file(run_dir / "report.json", report_to_json(report).dump(2) + "\n");
    reports.push_back(report);
  }

  std::set<std::string> categories_seen;
  for (const auto& r : reports)
    for (const auto& [name, c] : r.per_category) categories_seen.insert(name);

  std::ostringstream grid;
  char buf[64];
  grid << "F1 by generated:real ratio N\n";
  std::snprintf(buf, sizeof(buf), "%-16s", "category");
  grid << buf;
  for (double n : ns) {
    std::snprintf(buf, sizeof(buf), " %9s", ("N=" + format_ratio(n)).c_str());
    grid << buf;
  }
  grid << "\n";
  auto f1_cell = [&](const EvalReport& r, const std::string& cat) -> std::string {
    const auto it = r.per_category.find(cat);
    if (it == r.per_category.end()) return "-";
    std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * it->second.f1);
    return buf;
  };
  for (const auto& cat : categories_seen) {
    std::snprintf(buf, sizeof(buf), "%-16s", cat.c_str());
    grid << buf;
    for (size_t i = 0; i < ns.size(); ++i) {
      std::snprintf(buf, sizeof(buf), " %9s", f1_cell(reports[i], cat).c_str());
      grid << buf;
    }
    grid << "\n";
  }
  std::snprintf(buf, sizeof(buf), "%-16s", "total");
  grid << buf;
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof(buf), " %9.1f", 100.0 * r.total.f1);
    grid << buf;
  }
  grid << "\n";

  std::cout << grid.str();
  write_text_file(fs::path(cfg.out_dir) / "ablation.txt", grid.str());

  nlohmann::json j;
  for (size_t i = 0; i < ns.size(); ++i)
    j["runs"].push_back({{"ratio_n", ns[i]}, {"report", report_to_json(reports[i])}});
  write_text_file(fs::path(cfg.out_dir) / "ablation.json", j.dump(2) + "\n");

  std::vector<std::pair<std::string, real>> bars;
  for (size_t i = 0; i < ns.size(); ++i)
    bars.emplace_back("N=" + format_ratio(ns[i]), 100 * reports[i].total.f1);
  PlotConfig pc;
  pc.title = "TOTAL F1 VS RATIO N";
  pc.y_label = "F1 %";
  plot_bars(bars, pc, (fs::path(cfg.out_dir) / "ablation.png").string());
  std::cout << "grid: " << (fs::path(cfg.out_dir) / "ablation.txt").string() << "\n";
  return 0;
}

int cmd_plot(const RunConfig& cfg, const std::string& log_path, std::vector<std::string> fields,
             const std::string& x_field, const std::string& out_flag,
             const std::string& title) {
  require_path(log_path, "log file");
  if (fields.empty()) fields = {"val_miou"};
  std::ifstream f(log_path);
  LL_REQUIRE(f.good(), "cannot read log: " + log_path);
  std::vector<Series> series(fields.size());
  for (size_t i = 0; i < fields.size(); ++i) series[i].name = fields[i];
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
    LL_REQUIRE(!rec.is_discarded(),
               "malformed log record at " + log_path + ":" + std::to_string(lineno));
    const real x = rec.contains(x_field) ? rec.at(x_field).get<real>()
                                         : static_cast<real>(lineno);
    for (size_t i = 0; i < fields.size(); ++i)
      if (rec.contains(fields[i]))
        series[i].points.emplace_back(x, rec.at(fields[i]).get<real>());
  }
  PlotConfig pc;
  pc.title = title;
  pc.x_label = x_field;
  const std::string out_path =
      out_flag.empty() ? (fs::path(cfg.out_dir) / "plot.png").string() : out_flag;
  plot_series(series, pc, out_path);
  std::cout << "plot: " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Light-condition style transfer pipeline for lane detection"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalArgs g;
  app.add_option("--config", g.config, "JSON run config file");
  app.add_option("--profile", g.profile, "Profile (desk|full)")
      ->check(CLI::IsMember({"desk", "full"}));
  app.add_option("--seed", g.seed, "Override top-level seed");
  app.add_option("--out", g.out, "Output directory");

  int rc = 0;

  auto* synth = app.add_subcommand("synth", "Generate synthetic road scenes");
  std::string synth_domain, synth_dir;
  int synth_count = -1;
  synth->add_option("--domain", synth_domain, "bright|dark")
      ->check(CLI::IsMember({"bright", "dark"}));
  synth->add_option("--count", synth_count, "Scene count");
  synth->add_option("--dir", synth_dir, "Dataset directory");
  synth->callback(
      [&] { rc = cmd_synth(resolve_config(g), synth_domain, synth_count, synth_dir); });

  auto* train_gan = app.add_subcommand("train-gan", "Train the style-transfer GAN");
  std::string gan_x, gan_y;
  int gan_epochs = -1;
  train_gan->add_option("--domain-x", gan_x, "Suitable-light image list");
  train_gan->add_option("--domain-y", gan_y, "Low-light image list");
  train_gan->add_option("--epochs", gan_epochs, "Override epoch count");
  train_gan->callback([&] { rc = cmd_train_gan(resolve_config(g), gan_x, gan_y, gan_epochs); });

  auto* transfer = app.add_subcommand("transfer", "Translate sources to low light");
  std::string tr_ckpt, tr_sources;
  transfer->add_option("--checkpoint", tr_ckpt, "GAN checkpoint");
  transfer->add_option("--sources", tr_sources, "Source training list (with labels)");
  transfer->callback([&] { rc = cmd_transfer(resolve_config(g), tr_ckpt, tr_sources); });

  auto* train_det = app.add_subcommand("train-detector", "Train the lane detector");
  std::string det_train, det_val, det_manifest;
  double det_ratio = -1;
  int det_epochs = -1;
  int64_t det_low_light = -1;
  train_det->add_option("--train", det_train, "Training list");
  train_det->add_option("--val", det_val, "Validation list");
  train_det->add_option("--manifest", det_manifest, "Transfer manifest (enables augmentation)");
  train_det->add_option("--ratio-n", det_ratio, "Generated:real ratio N");
  train_det->add_option("--epochs", det_epochs, "Override epoch count");
  train_det->add_option("--real-low-light", det_low_light,
                        "Count of low-light entries in the train list");
  train_det->callback([&] {
    rc = cmd_train_detector(resolve_config(g), det_train, det_val, det_manifest, det_ratio,
                            det_epochs, det_low_light);
  });

  auto* evaluate = app.add_subcommand("evaluate", "Score a checkpoint on a test set");
  std::string ev_ckpt, ev_categories, ev_gt_dir;
  evaluate->add_option("--checkpoint", ev_ckpt, "Detector checkpoint");
  evaluate->add_option("--categories", ev_categories, "Category index file");
  evaluate->add_option("--gt-dir", ev_gt_dir, "Ground-truth root (default: index directory)");
  evaluate->callback(
      [&] { rc = cmd_evaluate(resolve_config(g), ev_ckpt, ev_categories, ev_gt_dir); });

  auto* ablate = app.add_subcommand("ablate-ratio", "Sweep the augmentation ratio N");
  std::string ab_train, ab_val, ab_manifest, ab_categories, ab_gt_dir;
  std::vector<double> ab_n;
  int64_t ab_low_light = -1;
  ablate->add_option("--train", ab_train, "Real training list");
  ablate->add_option("--val", ab_val, "Validation list");
  ablate->add_option("--manifest", ab_manifest, "Transfer manifest");
  ablate->add_option("--categories", ab_categories, "Category index file");
  ablate->add_option("--gt-dir", ab_gt_dir, "Ground-truth root (default: index directory)");
  ablate->add_option("--n", ab_n, "Ratio values (default: profile sweep)")->delimiter(',');
  ablate->add_option("--real-low-light", ab_low_light,
                     "Count of low-light entries in the train list");
  ablate->callback([&] {
    rc = cmd_ablate_ratio(resolve_config(g), ab_train, ab_val, ab_manifest, ab_categories,
                          ab_gt_dir, ab_n, ab_low_light);
  });

  auto* plot = app.add_subcommand("plot", "Render series from a JSONL log");
  std::string pl_log, pl_x = "epoch", pl_out, pl_title;
  std::vector<std::string> pl_fields;
  plot->add_option("--log", pl_log, "JSONL log file")->required();
  plot->add_option("--fields", pl_fields, "Record fields to plot (default: val_miou)")
      ->delimiter(',');
  plot->add_option("--x", pl_x, "Record field for the x axis");
  plot->add_option("--out-file", pl_out, "Output PNG path");
  plot->add_option("--title", pl_title, "Plot title");
  plot->callback([&] {
    rc = cmd_plot(resolve_config(g), pl_log, pl_fields, pl_x, pl_out, pl_title);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
