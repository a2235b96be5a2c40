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

#include "core/control.hpp"

namespace vine::control {

void ControllerGains::validate() const {
  if (!(kp_e >= 0.0 && ff_e >= 0.0 && kp_s >= 0.0 && kd_s >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "controller gains must be non-negative");
  }
}

MotorVector compute_motor_command(const MotorVector& psi, const MotorVector& psi_prev,
                                  double actual_length, const ControllerGains& gains,
                                  double dt, bool pressurized) {
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dt must be positive");
  MotorVector rate;
  for (int i = 0; i < 3; ++i) {
    const double p = gains.kp_s * psi.steering(i);
    const double d = gains.kd_s * (psi.steering(i) - psi_prev.steering(i)) / dt;
    rate.steering(i) = actual_length * (p + d);
  }
  rate.e = gains.kp_e * psi.e - (pressurized ? gains.ff_e : 0.0);
  return rate;
}

}  // namespace vine::control
