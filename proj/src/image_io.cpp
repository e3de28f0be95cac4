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

#include "lightlane/image_io.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace lightlane {

namespace {

uint8_t to_byte(real v) {
  const real scaled = (std::clamp(v, real(-1), real(1)) + 1) * real(127.5);
  return static_cast<uint8_t>(std::lround(std::clamp(scaled, real(0), real(255))));
}

}  // namespace

Image load_image_rgb(const std::string& path) {
  cv::Mat mat = cv::imread(path, cv::IMREAD_COLOR);
  LL_REQUIRE(!mat.empty(), "failed to read image: " + path);
  Image img(3, mat.rows, mat.cols);
  for (int y = 0; y < mat.rows; ++y) {
    const cv::Vec3b* row = mat.ptr<cv::Vec3b>(y);
    for (int x = 0; x < mat.cols; ++x) {
      // OpenCV loads BGR.
      img.at(0, y, x) = row[x][2] / real(127.5) - 1;
      img.at(1, y, x) = row[x][1] / real(127.5) - 1;
      img.at(2, y, x) = row[x][0] / real(127.5) - 1;
    }
  }
  return img;
}

void save_image_rgb(const std::string& path, const Image& img) {
  LL_CHECK(img.channels == 3, "save_image_rgb: expects 3 channels");
  cv::Mat mat(img.height, img.width, CV_8UC3);
  for (int y = 0; y < img.height; ++y) {
    cv::Vec3b* row = mat.ptr<cv::Vec3b>(y);
    for (int x = 0; x < img.width; ++x) {
      row[x][2] = to_byte(img.at(0, y, x));
      row[x][1] = to_byte(img.at(1, y, x));
      row[x][0] = to_byte(img.at(2, y, x));
    }
  }
  LL_REQUIRE(cv::imwrite(path, mat), "failed to write image: " + path);
}

Image load_mask(const std::string& path) {
  cv::Mat mat = cv::imread(path, cv::IMREAD_GRAYSCALE);
  LL_REQUIRE(!mat.empty(), "failed to read mask: " + path);
  Image mask(1, mat.rows, mat.cols);
  for (int y = 0; y < mat.rows; ++y) {
    const uint8_t* row = mat.ptr<uint8_t>(y);
    for (int x = 0; x < mat.cols; ++x) mask.at(0, y, x) = row[x] >= 128 ? real(1) : real(0);
  }
  return mask;
}

void save_mask(const std::string& path, const Image& mask) {
  LL_CHECK(mask.channels == 1, "save_mask: expects 1 channel");
  cv::Mat mat(mask.height, mask.width, CV_8UC1);
  for (int y = 0; y < mask.height; ++y) {
    uint8_t* row = mat.ptr<uint8_t>(y);
    for (int x = 0; x < mask.width; ++x) row[x] = mask.at(0, y, x) != 0 ? 255 : 0;
  }
  LL_REQUIRE(cv::imwrite(path, mat), "failed to write mask: " + path);
}

Image load_label_mask(const std::string& path) {
  cv::Mat mat = cv::imread(path, cv::IMREAD_GRAYSCALE);
  LL_REQUIRE(!mat.empty(), "failed to read label mask: " + path);
  Image labels(1, mat.rows, mat.cols);
  for (int y = 0; y < mat.rows; ++y) {
    const uint8_t* row = mat.ptr<uint8_t>(y);
    for (int x = 0; x < mat.cols; ++x) labels.at(0, y, x) = static_cast<real>(row[x]);
  }
  return labels;
}

void save_label_mask(const std::string& path, const Image& labels) {
  LL_CHECK(labels.channels == 1, "save_label_mask: expects 1 channel");
  cv::Mat mat(labels.height, labels.width, CV_8UC1);
  for (int y = 0; y < labels.height; ++y) {
    uint8_t* row = mat.ptr<uint8_t>(y);
    for (int x = 0; x < labels.width; ++x) {
      const real v = std::clamp(labels.at(0, y, x), real(0), real(255));
      row[x] = static_cast<uint8_t>(std::lround(v));
    }
  }
  LL_REQUIRE(cv::imwrite(path, mat), "failed to write label mask: " + path);
}

}  // namespace lightlane
