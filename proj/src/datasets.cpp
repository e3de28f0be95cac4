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

#include "lightlane/datasets.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace lightlane {

namespace {

std::string read_text_file(const std::string& path) {
  std::ifstream f(path);
  LL_REQUIRE(f.good(), "cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  LL_REQUIRE(f.good(), "cannot open for write: " + path);
  f << text;
  f.flush();
  LL_REQUIRE(f.good(), "write failed: " + path);
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

real parse_real(const std::string& tok, const std::string& origin, int line_no) {
  try {
    size_t pos = 0;
    const real v = std::stod(tok, &pos);
    LL_REQUIRE(pos == tok.size(), "");
    return v;
  } catch (const std::exception&) {
    throw PipelineError(origin + ": malformed number '" + tok + "' at line " +
                        std::to_string(line_no));
  }
}

std::string resolve_against(const fs::path& base_dir, const std::string& p) {
  fs::path fp(p);
  if (fp.is_absolute()) return p;
  return (base_dir / fp).lexically_normal().string();
}

}  // namespace

LaneAnnotation parse_lines_text(const std::string& text, const std::string& origin) {
  LaneAnnotation ann;
  std::istringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const std::vector<std::string> toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() % 2 != 0)
      throw PipelineError(origin + ": odd token count at line " + std::to_string(line_no));
    Polyline lane;
    for (size_t i = 0; i < toks.size(); i += 2) {
      const real x = parse_real(toks[i], origin, line_no);
      const real y = parse_real(toks[i + 1], origin, line_no);
      lane.points.emplace_back(x, y);
    }
    ann.existence.push_back(lane.points.size() >= 2 ? 1 : 0);
    ann.lanes.push_back(std::move(lane));
  }
  return ann;
}

LaneAnnotation parse_lines_file(const std::string& path) {
  return parse_lines_text(read_text_file(path), path);
}

std::string lanes_to_lines_text(const std::vector<Polyline>& lanes) {
  std::string out;
  char buf[64];
  for (const auto& lane : lanes) {
    for (size_t i = 0; i < lane.points.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.4f %.4f", lane.points[i].first, lane.points[i].second);
      if (i) out += ' ';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::vector<ListEntry> load_train_list(const std::string& path, int lane_slots) {
  LL_CHECK(lane_slots >= 1, "load_train_list: lane_slots must be >= 1");
  const std::string text = read_text_file(path);
  const fs::path base = fs::path(path).parent_path();
  std::vector<ListEntry> out;
  std::istringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const std::vector<std::string> toks = split_ws(line);
    if (toks.empty()) continue;
    if (static_cast<int>(toks.size()) != 2 + lane_slots)
      throw PipelineError(path + ": expected " + std::to_string(2 + lane_slots) +
                          " columns at line " + std::to_string(line_no) + ", got " +
                          std::to_string(toks.size()));
    ListEntry e;
    e.image_path = resolve_against(base, toks[0]);
    e.seg_label_path = resolve_against(base, toks[1]);
    for (int i = 0; i < lane_slots; ++i) {
      const std::string& t = toks[static_cast<size_t>(2 + i)];
      if (t != "0" && t != "1")
        throw PipelineError(path + ": existence flag must be 0 or 1 at line " +
                            std::to_string(line_no));
      e.existence.push_back(t == "1" ? 1 : 0);
    }
    out.push_back(std::move(e));
  }
  return out;
}

void write_train_list(const std::string& path, const std::vector<ListEntry>& entries) {
  std::string text;
  for (const auto& e : entries) {
    text += e.image_path + " " + e.seg_label_path;
    for (int f : e.existence) text += f ? " 1" : " 0";
    text += '\n';
  }
  write_text_file(path, text);
}

std::vector<std::string> load_image_list(const std::string& path) {
  const std::string text = read_text_file(path);
  const fs::path base = fs::path(path).parent_path();
  std::vector<std::string> out;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    const std::vector<std::string> toks = split_ws(line);
    if (toks.empty()) continue;
    LL_REQUIRE(toks.size() == 1, path + ": expected one path per line");
    out.push_back(resolve_against(base, toks[0]));
  }
  return out;
}

void write_image_list(const std::string& path, const std::vector<std::string>& paths) {
  std::string text;
  for (const auto& p : paths) text += p + '\n';
  write_text_file(path, text);
}

std::vector<std::pair<std::string, std::string>> load_category_index(const std::string& path) {
  const std::string text = read_text_file(path);
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    LL_REQUIRE(tab != std::string::npos && tab > 0 && tab + 1 < line.size(),
               path + ": expected 'path<TAB>category' at line " + std::to_string(line_no));
    out.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return out;
}

std::string lines_path_for(const std::string& image_path) {
  fs::path p(image_path);
  p.replace_extension(".lines.txt");
  return p.string();
}

}  // namespace lightlane
