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

#include "lightlane/datasets.hpp"
#include "lightlane/simcyclegan.hpp"

namespace lightlane {

// One translated image. A record whose generated path is "-" marks a source
// that could not be processed.
struct TransferRecord {
  std::string source;
  std::string generated;
  std::string label;  // carried over from the source unchanged
  bool skipped() const { return generated == "-"; }
};

struct TransferManifest {
  std::vector<TransferRecord> records;
  std::string checkpoint_id;
  std::string timestamp;
};

struct TransferTrainConfig {
  GanTrainConfig gan;
  int epochs = 100;  // one image per batch, 100 epochs
  int batch = 1;
  int resize_h = 0;  // full profile trains at 295x820; 0 keeps native dims
  int resize_w = 0;
  std::string checkpoint_dir;  // per-epoch checkpoints when non-empty
  std::string log_path;        // JSONL per-epoch loss curves when non-empty
};

void to_json(nlohmann::json& j, const TransferTrainConfig& c);
void from_json(const nlohmann::json& j, TransferTrainConfig& c);

// Unpaired adversarial training over shuffled batches; the longer domain
// defines the epoch length and the shorter one wraps. Unreadable images are
// skipped with a warning; more than 10% skipped fails the run.
GanBundle train_transfer(const TransferTrainConfig& cfg, const DomainDataset& domain_x,
                         const DomainDataset& domain_y);

// Applies G_A to every source at native resolution and writes lossless PNGs
// under out_dir. Labels are reused verbatim; per-image failures become
// skipped records.
TransferManifest transfer_batch(const GanBundle& bundle, const DomainDataset& sources,
                                const std::string& out_dir);

// Manifest text: "# checkpoint:" / "# timestamp:" headers, then one
// tab-separated "source<TAB>generated<TAB>label" row per record.
void write_manifest(const TransferManifest& m, const std::string& path);
TransferManifest load_manifest(const std::string& path);

// Lane slots whose class id appears in the mask count as existent.
std::vector<int> existence_from_label_mask(const std::string& path, int lane_slots);

// Emits all real entries plus round(ratio_n * base) generated entries
// sampled uniformly without replacement, where base is the count of real
// low-light entries. real_low_light_count < 0 derives the base: all entries
// when the pool is tagged low-light, otherwise entries whose category
// contains "dark" or "night", falling back to the full real count when none
// match. Existence flags for generated entries come from their label masks.
std::vector<ListEntry> build_augmented_trainset(const DomainDataset& real_pool,
                                                const TransferManifest& manifest, real ratio_n,
                                                uint64_t seed, const std::string& out_path,
                                                int64_t real_low_light_count = -1);

}  // namespace lightlane
