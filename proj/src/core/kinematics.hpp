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

namespace vine::kinematics {

/// Pair of motor axes bounding a planar direction. The motor axes point at
/// -pi/3 (s1), +pi/3 (s2) and pi (s3).
enum class SteeringSector { S12, S23, S13 };

/// Below this length a target direction is undefined.
inline constexpr double kLengthEpsilon = 1e-6;
/// Minimum robot length used when converting arc distances to angles.
inline constexpr double kMinAngleLength = 1e-3;
/// Slack allowed before forward_kinematics reports a degenerate pose.
inline constexpr double kDegenerateTolerance = 1e-9;

struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;
};

PlanarPoint forward_steering(const MotorVector& s);

SteeringSector classify_sector(double x, double y);

/// Two-motor solution of the steering map. The coordinate not bounding the
/// sector is exactly zero, the other two are non-negative; e is zero.
MotorVector inverse_steering(double x, double y);

double eversion_length(const CartesianPoint& p);

/// Tip position for a motor configuration, choosing the hemisphere below the
/// base. Throws ErrorCode::kDegenerateConfiguration when the steering
/// displacement exceeds the robot length.
CartesianPoint forward_kinematics(const MotorVector& s);

/// Point on the sphere of radius |a| collinear with d.
CartesianPoint compute_proxy(const CartesianPoint& a, const CartesianPoint& d);

/// True when both vectors have a zero steering coordinate at the same index,
/// i.e. the robot keeps steering in the same sector and no cable release is
/// required.
bool share_null_coordinate(const MotorVector& t_m, const MotorVector& a_m);

/// Transfers epsilon * max(s) from every steering coordinate so that part of
/// the pulling turns into cable release. The planar image is unchanged.
MotorVector redistribute_actuation(const MotorVector& t_m, const MotorVector& a_m,
                                   double epsilon);

struct ErrorEvaluation {
  MotorVector psi;        // steering in radians, eversion in meters
  MotorVector steering;   // t^m after redistribution, before angle conversion
  MotorVector raw_steering;  // t^m straight out of inverse_steering
  CartesianPoint proxy;
  double actual_length = 0.0;
  double desired_length = 0.0;
};

/// Motor-space error between desired d and actual a. a_m_prev is the steering
/// command of the previous iteration, used for the redistribution test.
ErrorEvaluation evaluate_error(const CartesianPoint& d, const CartesianPoint& a,
                               const MotorVector& a_m_prev, double epsilon);

}  // namespace vine::kinematics
