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
#include <utility>
#include <vector>

#include "lightlane/imaging.hpp"

namespace lightlane {

struct Series {
  std::string name;
  std::vector<std::pair<real, real>> points;  // (x, y)
};

struct PlotConfig {
  int width = 640;
  int height = 400;
  std::string title;
  std::string x_label;
  std::string y_label;
};

// Line chart of one or more series with axes, ticks and a legend.
void plot_series(const std::vector<Series>& series, const PlotConfig& cfg,
                 const std::string& out_path);

// Labeled bar chart; bar values are printed above each bar.
void plot_bars(const std::vector<std::pair<std::string, real>>& bars, const PlotConfig& cfg,
               const std::string& out_path);

}  // namespace lightlane
