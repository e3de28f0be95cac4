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

#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "lightlane/common.hpp"
#include "lightlane/image_io.hpp"
#include "lightlane/plotting.hpp"
#include "test_util.hpp"

using namespace lightlane;
using namespace lightlane::testutil;

TEST_SUITE("plotting") {

TEST_CASE("plot_series renders a readable line chart") {
  TempDir tmp("ll_plot");
  Series a{"val_miou", {{0, 0.1}, {1, 0.4}, {2, 0.55}, {3, 0.6}}};
  Series b{"train_loss", {{0, 1.5}, {1, 0.8}, {2, 0.5}, {3, 0.42}}};
  PlotConfig cfg;
  cfg.title = "training curves";
  cfg.x_label = "epoch";
  cfg.y_label = "value";
  plot_series({a, b}, cfg, tmp.file("curves.png"));
  REQUIRE(std::filesystem::exists(tmp.file("curves.png")));
  Image img = load_image_rgb(tmp.file("curves.png"));
  CHECK(img.height == cfg.height);
  CHECK(img.width == cfg.width);
  // Not blank: some pixels differ from the white background.
  int nonwhite = 0;
  for (real v : img.data) nonwhite += v < 0.9;
  CHECK(nonwhite > 100);
}

TEST_CASE("plot_bars renders labeled bars") {
  TempDir tmp("ll_plot2");
  PlotConfig cfg;
  cfg.title = "f1 by ratio";
  plot_bars({{"n0.25", 0.41}, {"n1", 0.62}, {"n4", 0.57}}, cfg, tmp.file("bars.png"));
  REQUIRE(std::filesystem::exists(tmp.file("bars.png")));
  Image img = load_image_rgb(tmp.file("bars.png"));
  CHECK(img.height == cfg.height);
  CHECK(img.width == cfg.width);
  int nonwhite = 0;
  for (real v : img.data) nonwhite += v < 0.9;
  CHECK(nonwhite > 100);
}

TEST_CASE("degenerate inputs still render") {
  TempDir tmp("ll_plot3");
  PlotConfig cfg;
  SUBCASE("single point") {
    plot_series({{"one", {{0.0, 0.5}}}}, cfg, tmp.file("one.png"));
    CHECK(std::filesystem::exists(tmp.file("one.png")));
  }
  SUBCASE("flat series") {
    plot_series({{"flat", {{0.0, 1.0}, {1.0, 1.0}, {2.0, 1.0}}}}, cfg, tmp.file("flat.png"));
    CHECK(std::filesystem::exists(tmp.file("flat.png")));
  }
  SUBCASE("empty series list is rejected") {
    CHECK_THROWS(plot_series({}, cfg, tmp.file("never.png")));
  }
  SUBCASE("undersized canvas is rejected") {
    PlotConfig small;
    small.width = 20;
    small.height = 20;
    CHECK_THROWS(plot_series({{"s", {{0.0, 1.0}, {1.0, 2.0}}}}, small, tmp.file("small.png")));
  }
}

}  // TEST_SUITE
