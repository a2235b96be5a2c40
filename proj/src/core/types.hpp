// Copyright 2026 The vinesim Authors
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

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace vine {

/// Point in the robot base frame, meters. z points along gravity, so the
/// workspace below the base has negative z.
using CartesianPoint = Eigen::Vector3d;

/// Motor-space configuration: three steering coordinates (meters of cable
/// travel projected in the plane) plus the eversion length.
struct MotorVector {
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
  double e = 0.0;

  double steering(int i) const { return i == 0 ? s1 : (i == 1 ? s2 : s3); }
  double& steering(int i) { return i == 0 ? s1 : (i == 1 ? s2 : s3); }

  friend bool operator==(const MotorVector&, const MotorVector&) = default;
};

enum class ErrorCode : int {
  kInvalidArgument = 1,
  kDegenerateConfiguration = 2,
  kDegenerateTarget = 3,
  kParse = 4,
  kIo = 5,
  kState = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline bool is_finite(const CartesianPoint& p) { return p.allFinite(); }

}  // namespace vine
