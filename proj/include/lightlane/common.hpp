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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lightlane {

// Scalar type used by all numeric kernels. Double keeps finite-difference
// gradient checks well away from roundoff noise.
using real = double;

// Contract violations (bad arguments, shape mismatches) throw this.
class ContractError : public std::invalid_argument {
 public:
  explicit ContractError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Unrecoverable runtime failures (I/O, corrupt files) throw this.
class PipelineError : public std::runtime_error {
 public:
  explicit PipelineError(const std::string& msg) : std::runtime_error(msg) {}
};

#define LL_CHECK(cond, msg)                         \
  do {                                              \
    if (!(cond)) throw ::lightlane::ContractError(msg); \
  } while (0)

#define LL_REQUIRE(cond, msg)                       \
  do {                                              \
    if (!(cond)) throw ::lightlane::PipelineError(msg); \
  } while (0)

}  // namespace lightlane
