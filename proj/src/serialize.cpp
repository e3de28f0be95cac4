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

#include "lightlane/serialize.hpp"

#include <cstdint>
#include <fstream>

namespace lightlane {

namespace {
constexpr char kMagic[4] = {'L', 'L', 'T', 'A'};
constexpr uint32_t kVersion = 1;
}  // namespace

void TensorArchive::put(const std::string& name, Tensor t) {
  LL_CHECK(!has(name), "TensorArchive: duplicate tensor name: " + name);
  entries_.emplace_back(name, std::move(t));
}

bool TensorArchive::has(const std::string& name) const {
  for (const auto& [n, t] : entries_)
    if (n == name) return true;
  return false;
}

const Tensor& TensorArchive::get(const std::string& name) const {
  for (const auto& [n, t] : entries_)
    if (n == name) return t;
  throw PipelineError("TensorArchive: missing tensor: " + name);
}

void TensorArchive::save(const std::string& path) const {
  nlohmann::json header;
  header["meta"] = meta;
  header["tensors"] = nlohmann::json::array();
  for (const auto& [name, t] : entries_)
    header["tensors"].push_back({{"name", name}, {"shape", t.shape()}});
  const std::string hs = header.dump();

  std::ofstream f(path, std::ios::binary);
  LL_REQUIRE(f.good(), "cannot open for write: " + path);
  f.write(kMagic, 4);
  const uint32_t ver = kVersion;
  f.write(reinterpret_cast<const char*>(&ver), sizeof(ver));
  const uint64_t hlen = hs.size();
  f.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
  f.write(hs.data(), static_cast<std::streamsize>(hs.size()));
  for (const auto& [name, t] : entries_)
    f.write(reinterpret_cast<const char*>(t.data()),
            static_cast<std::streamsize>(t.numel() * static_cast<int64_t>(sizeof(real))));
  f.flush();
  LL_REQUIRE(f.good(), "write failed: " + path);
}

TensorArchive TensorArchive::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  LL_REQUIRE(f.good(), "cannot open for read: " + path);
  char magic[4];
  f.read(magic, 4);
  LL_REQUIRE(f.good() && std::equal(magic, magic + 4, kMagic), "not an archive: " + path);
  uint32_t ver = 0;
  f.read(reinterpret_cast<char*>(&ver), sizeof(ver));
  LL_REQUIRE(f.good() && ver == kVersion,
             "unsupported archive version in " + path + ": " + std::to_string(ver));
  uint64_t hlen = 0;
  f.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
  LL_REQUIRE(f.good() && hlen > 0 && hlen < (1ULL << 30), "corrupt archive header: " + path);
  std::string hs(hlen, '\0');
  f.read(hs.data(), static_cast<std::streamsize>(hlen));
  LL_REQUIRE(f.good(), "truncated archive header: " + path);
  nlohmann::json header = nlohmann::json::parse(hs, nullptr, false);
  LL_REQUIRE(!header.is_discarded(), "bad archive header JSON: " + path);

  TensorArchive a;
  a.meta = header.value("meta", nlohmann::json::object());
  for (const auto& e : header.at("tensors")) {
    const std::string name = e.at("name").get<std::string>();
    const std::vector<int> shape = e.at("shape").get<std::vector<int>>();
    Tensor t(shape);
    f.read(reinterpret_cast<char*>(t.data()),
           static_cast<std::streamsize>(t.numel() * static_cast<int64_t>(sizeof(real))));
    LL_REQUIRE(f.good(), "truncated tensor data in " + path + " at " + name);
    a.entries_.emplace_back(name, std::move(t));
  }
  return a;
}

}  // namespace lightlane
