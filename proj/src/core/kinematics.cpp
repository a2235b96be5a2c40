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

#include "core/kinematics.hpp"

#include <algorithm>
#include <cmath>

namespace vine::kinematics {
namespace {

// cos(pi/3) and sin(pi/3) of the motor axis half lines.
constexpr double kCos60 = 0.5;
const double kSin60 = std::sqrt(3.0) / 2.0;

// Roundoff at sector boundaries can leave -1e-17 in a coordinate that is
// exactly zero in real arithmetic.
double non_negative(double v) { return std::max(0.0, v); }

struct SectorSolution {
  double s1, s2, s3;
};

SectorSolution solve_s12(double x, double y) {
  return {x / (2.0 * kCos60) - y / (2.0 * kSin60), x / (2.0 * kCos60) + y / (2.0 * kSin60), 0.0};
}

SectorSolution solve_s23(double x, double y) {
  const double s2 = y / kSin60;
  return {0.0, s2, s2 * kCos60 - x};
}

SectorSolution solve_s13(double x, double y) {
  const double s1 = -y / kSin60;
  return {s1, 0.0, s1 * kCos60 - x};
}

bool reachable(const SectorSolution& s) { return s.s1 >= 0.0 && s.s2 >= 0.0 && s.s3 >= 0.0; }

}  // namespace

PlanarPoint forward_steering(const MotorVector& s) {
  return {s.s1 * kCos60 + s.s2 * kCos60 - s.s3, -s.s1 * kSin60 + s.s2 * kSin60};
}

SteeringSector classify_sector(double x, double y) {
  if (reachable(solve_s12(x, y))) return SteeringSector::S12;
  if (reachable(solve_s23(x, y))) return SteeringSector::S23;
  return SteeringSector::S13;
}

MotorVector inverse_steering(double x, double y) {
  SectorSolution s{};
  switch (classify_sector(x, y)) {
    case SteeringSector::S12: s = solve_s12(x, y); break;
    case SteeringSector::S23: s = solve_s23(x, y); break;
    case SteeringSector::S13: s = solve_s13(x, y); break;
  }
  return {non_negative(s.s1), non_negative(s.s2), non_negative(s.s3), 0.0};
}

double eversion_length(const CartesianPoint& p) { return p.norm(); }

CartesianPoint forward_kinematics(const MotorVector& s) {
  const PlanarPoint xy = forward_steering(s);
  const double planar_sq = xy.x * xy.x + xy.y * xy.y;
  const double length_sq = s.e * s.e;
  if (std::sqrt(planar_sq) - s.e > kDegenerateTolerance || s.e < 0.0) {
    throw Error(ErrorCode::kDegenerateConfiguration,
                "steering displacement exceeds robot length");
  }
  return {xy.x, xy.y, -std::sqrt(std::max(0.0, length_sq - planar_sq))};
}

CartesianPoint compute_proxy(const CartesianPoint& a, const CartesianPoint& d) {
  const double desired_length = d.norm();
  if (!(desired_length > kLengthEpsilon)) {
    throw Error(ErrorCode::kDegenerateTarget, "desired position too close to the base");
  }
  return d * (a.norm() / desired_length);
}

bool share_null_coordinate(const MotorVector& t_m, const MotorVector& a_m) {
  for (int i = 0; i < 3; ++i) {
    if (t_m.steering(i) == 0.0 && a_m.steering(i) == 0.0) return true;
  }
  return false;
}

MotorVector redistribute_actuation(const MotorVector& t_m, const MotorVector& a_m,
                                   double epsilon) {
  if (share_null_coordinate(t_m, a_m)) return t_m;
  const double release = std::max({t_m.s1, t_m.s2, t_m.s3}) * epsilon;
  MotorVector out = t_m;
  out.s1 -= release;
  out.s2 -= release;
  out.s3 -= release;
  return out;
}

ErrorEvaluation evaluate_error(const CartesianPoint& d, const CartesianPoint& a,
                               const MotorVector& a_m_prev, double epsilon) {
  ErrorEvaluation out;
  out.actual_length = eversion_length(a);
  out.desired_length = eversion_length(d);
  out.proxy = compute_proxy(a, d);

  const CartesianPoint t = out.proxy - a;
  out.raw_steering = inverse_steering(t.x(), t.y());
  out.steering = redistribute_actuation(out.raw_steering, a_m_prev, epsilon);

  const double arc_length = std::max(out.actual_length, kMinAngleLength);
  out.psi.s1 = out.steering.s1 / arc_length;
  out.psi.s2 = out.steering.s2 / arc_length;
  out.psi.s3 = out.steering.s3 / arc_length;
  out.psi.e = out.desired_length - out.actual_length;
  return out;
}

}  // namespace vine::kinematics
