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

#include "doctest.h"
#include "lightlane/common.hpp"
#include "lightlane/image_io.hpp"
#include "lightlane/imaging.hpp"
#include "lightlane/random.hpp"
#include "test_util.hpp"

using namespace lightlane;
using namespace lightlane::testutil;

TEST_SUITE("imaging") {

TEST_CASE("pad_to_multiple picks the smallest covering dims") {
  auto rng = make_rng(31, 0);
  SUBCASE("295x820 to multiple 4") {
    Image img = random_image(3, 295, 820, rng);
    auto [padded, trace] = pad_to_multiple(img, 4);
    CHECK(padded.height == 296);
    CHECK(padded.width == 820);
    CHECK(trace.pad_bottom == 1);
    CHECK(trace.pad_right == 0);
    CHECK(trace.original_height == 295);
    CHECK(trace.original_width == 820);
  }
  SUBCASE("13x7 to multiple 4") {
    Image img = random_image(1, 13, 7, rng);
    auto [padded, trace] = pad_to_multiple(img, 4);
    CHECK(padded.height == 16);
    CHECK(padded.width == 8);
    CHECK(trace.pad_bottom == 3);
    CHECK(trace.pad_right == 1);
  }
  SUBCASE("already aligned input is unchanged") {
    Image img = random_image(3, 256, 256, rng);
    auto [padded, trace] = pad_to_multiple(img, 4);
    CHECK(padded.height == 256);
    CHECK(padded.width == 256);
    CHECK(trace.pad_bottom == 0);
    CHECK(trace.pad_right == 0);
    CHECK(bit_equal(padded, img));
  }
}

TEST_CASE("pad_to_multiple reflects border content") {
  Image img(1, 2, 3);
  // rows: [1 2 3; 4 5 6]
  for (int i = 0; i < 6; ++i) img.data[i] = i + 1;
  auto [padded, trace] = pad_to_multiple(img, 4);
  REQUIRE(padded.height == 4);
  REQUIRE(padded.width == 4);
  // Reflection about the last row/column: x=3 -> x=1, y=2 -> y=0, y=3 -> y=1.
  CHECK(padded.at(0, 0, 3) == doctest::Approx(2.0));
  CHECK(padded.at(0, 1, 3) == doctest::Approx(5.0));
  CHECK(padded.at(0, 2, 0) == doctest::Approx(1.0));
  CHECK(padded.at(0, 2, 2) == doctest::Approx(3.0));
  CHECK(padded.at(0, 3, 1) == doctest::Approx(5.0));
  CHECK(padded.at(0, 3, 3) == doctest::Approx(5.0));
  (void)trace;
}

TEST_CASE("crop_to_trace inverts pad_to_multiple bit for bit") {
  auto rng = make_rng(32, 0);
  for (int multiple : {1, 2, 4, 8}) {
    for (int trial = 0; trial < 6; ++trial) {
      int h = uniform_int(rng, 1, 40), w = uniform_int(rng, 1, 40);
      Image img = random_image(3, h, w, rng);
      auto [padded, trace] = pad_to_multiple(img, multiple);
      CHECK(padded.height % multiple == 0);
      CHECK(padded.width % multiple == 0);
      CHECK(padded.height - h < multiple);
      CHECK(padded.width - w < multiple);
      Image back = crop_to_trace(padded, trace);
      CHECK(bit_equal(back, img));
    }
  }
}

TEST_CASE("crop_to_trace rejects mismatched dims") {
  auto rng = make_rng(33, 0);
  Image img = random_image(1, 10, 10, rng);
  auto [padded, trace] = pad_to_multiple(img, 4);
  (void)padded;
  Image wrong = random_image(1, 14, 12, rng);
  CHECK_THROWS_AS(crop_to_trace(wrong, trace), ContractError);
}

TEST_CASE("rasterize_lane matches the pixel-center oracle") {
  auto rng = make_rng(34, 0);
  for (int trial = 0; trial < 120; ++trial) {
    int h = uniform_int(rng, 8, 64), w = uniform_int(rng, 8, 64);
    int npts = uniform_int(rng, 2, 5);
    Polyline line;
    real y = uniform_real(rng, 0, h * 0.3);
    for (int i = 0; i < npts; ++i) {
      line.points.push_back({uniform_real(rng, -4.0, w + 4.0), y});
      y += uniform_real(rng, 0.5, h * 0.4);
    }
    real width = uniform_real(rng, 1.0, 12.0);
    Image got = rasterize_lane(line, width, h, w);
    Image want = rasterize_oracle(line, width, h, w);
    CHECK(bit_equal(got, want));
    if (!bit_equal(got, want)) {
      MESSAGE("trial " << trial << " h=" << h << " w=" << w << " width=" << width);
      break;
    }
  }
}

TEST_CASE("rasterize_lane horizontal fixture") {
  Polyline line;
  line.points = {{10.0, 50.0}, {190.0, 50.0}};
  Image got = rasterize_lane(line, 30.0, 100, 200);
  Image want = rasterize_oracle(line, 30.0, 100, 200);
  CHECK(bit_equal(got, want));
  // Rows fully inside the band are on across the segment span.
  CHECK(got.at(0, 50, 100) == 1.0);
  CHECK(got.at(0, 36, 100) == 1.0);
  CHECK(got.at(0, 64, 100) == 1.0);
  CHECK(got.at(0, 34, 100) == 0.0);
  CHECK(got.at(0, 66, 100) == 0.0);
}

TEST_CASE("rasterize_lane is invariant to point order reversal") {
  auto rng = make_rng(35, 0);
  for (int trial = 0; trial < 30; ++trial) {
    int h = uniform_int(rng, 8, 48), w = uniform_int(rng, 8, 48);
    Polyline line;
    int npts = uniform_int(rng, 2, 5);
    for (int i = 0; i < npts; ++i)
      line.points.push_back({uniform_real(rng, 0, w), uniform_real(rng, 0, h)});
    Polyline rev = line;
    std::reverse(rev.points.begin(), rev.points.end());
    CHECK(bit_equal(rasterize_lane(line, 5.0, h, w), rasterize_lane(rev, 5.0, h, w)));
  }
}

TEST_CASE("rasterize_lane with fewer than 2 points is empty") {
  Polyline empty;
  Image m = rasterize_lane(empty, 30.0, 16, 16);
  for (real v : m.data) CHECK(v == 0.0);
  Polyline one;
  one.points = {{8.0, 8.0}};
  m = rasterize_lane(one, 30.0, 16, 16);
  for (real v : m.data) CHECK(v == 0.0);
}

TEST_CASE("strict boundary: pixel centers exactly at width/2 stay off") {
  // Vertical segment along x=8; width 4 puts columns 6 and 10 exactly 2.0
  // away, which must stay off under the strict comparison.
  Polyline line;
  line.points = {{8.0, 0.0}, {8.0, 15.0}};
  Image m = rasterize_lane(line, 4.0, 16, 16);
  CHECK(m.at(0, 8, 8) == 1.0);
  CHECK(m.at(0, 8, 7) == 1.0);
  CHECK(m.at(0, 8, 9) == 1.0);
  CHECK(m.at(0, 8, 6) == 0.0);
  CHECK(m.at(0, 8, 10) == 0.0);
}

TEST_CASE("resize_bilinear preserves constants and endpoints") {
  auto rng = make_rng(36, 0);
  Image flat(3, 9, 13);
  for (auto& v : flat.data) v = 0.25;
  Image r = resize_bilinear(flat, 17, 5);
  CHECK(r.height == 17);
  CHECK(r.width == 5);
  for (real v : r.data) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
  Image img = random_image(1, 6, 6, rng, 0.0, 1.0);
  Image same = resize_bilinear(img, 6, 6);
  CHECK(max_abs_diff_img(same, img) < 1e-12);
}

TEST_CASE("image/tensor round trip") {
  auto rng = make_rng(37, 0);
  Image img = random_image(3, 7, 11, rng);
  Tensor t = image_to_tensor(img);
  REQUIRE(t.shape() == std::vector<int>({1, 3, 7, 11}));
  Image back = tensor_to_image(t);
  CHECK(bit_equal(back, img));
}

TEST_CASE("png round trip is exact at 8-bit resolution") {
  auto rng = make_rng(38, 0);
  TempDir tmp("ll_imaging");
  Image img(3, 12, 9);
  for (auto& v : img.data) {
    int q = uniform_int(rng, 0, 255);
    v = (q / 255.0) * 2.0 - 1.0;
  }
  save_image_rgb(tmp.file("img.png"), img);
  Image back = load_image_rgb(tmp.file("img.png"));
  REQUIRE(back.same_dims(img));
  CHECK(max_abs_diff_img(back, img) < 1.0 / 255.0 + 1e-9);

  Image labels(1, 6, 8);
  for (auto& v : labels.data) v = uniform_int(rng, 0, 4);
  save_label_mask(tmp.file("lab.png"), labels);
  Image lback = load_label_mask(tmp.file("lab.png"));
  REQUIRE(lback.same_dims(labels));
  CHECK(lback.data == labels.data);
}

}  // TEST_SUITE
