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

#include "lightlane/imaging.hpp"

namespace lightlane {

// PNG/JPEG bridge. Files are 8-bit; in-memory images are [-1,1] RGB CHW.
Image load_image_rgb(const std::string& path);
void save_image_rgb(const std::string& path, const Image& img);

// Single-channel {0,1} masks, stored as 8-bit {0,255}.
Image load_mask(const std::string& path);
void save_mask(const std::string& path, const Image& mask);

// Single-channel class-index labels, stored as raw 8-bit indices.
Image load_label_mask(const std::string& path);
void save_label_mask(const std::string& path, const Image& labels);

}  // namespace lightlane
