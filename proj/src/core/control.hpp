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

#include "core/types.hpp"

namespace vine::control {

/// Gains of the motor-space controller. Steering gains act on angle errors
/// and are scaled by the robot length; the eversion loop is P plus a
/// constant feedforward that cancels passive growth.
struct ControllerGains {
  double kp_e = 2.0;    // 1/s
  double ff_e = 0.002;  // m/s
  double kp_s = 3.0;    // 1/s
  double kd_s = 0.2;    // dimensionless

  void validate() const;
};

MotorVector compute_motor_command(const MotorVector& psi, const MotorVector& psi_prev,
                                  double actual_length, const ControllerGains& gains,
                                  double dt, bool pressurized);

}  // namespace vine::control
