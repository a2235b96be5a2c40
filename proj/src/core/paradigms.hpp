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

#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace vine::paradigms {

enum class ParadigmKind {
  kFullTeleoperation,
  kAssistAsNeeded,
  kFixedAssistance,
  kManualSteeringAutonomousEversion,
  kAutonomousSteeringManualEversion,
  kMostlyAutonomous,
};

/// CLI token: teleop, aan, fixed, msae, asme, auto.
std::string_view to_token(ParadigmKind kind);
std::optional<ParadigmKind> parse_kind(std::string_view token);

/// True when the robot controls growth along z, so the lift waypoint applies.
bool automates_growth(ParadigmKind kind);
bool renders_guidance(ParadigmKind kind);

struct ParadigmConfig {
  ParadigmKind kind = ParadigmKind::kFullTeleoperation;
  double f_max = 7.0;      // N
  double k_max = 50.0;     // N/m
  double delta = 20.0;     // N/m per second
  double xi_steady = 1.0;  // s
  double xi_closing = 3.0; // s
  double xi_away = 1.0;    // s
  double th_distance = 0.03;  // m
  double th_rate = 0.01;      // m/s
  double k_fixed = 10.0;   // N/m
  double b_fixed = 0.1;    // N s/m
  std::size_t filter_len = 50;
  std::size_t rate_window = 5;
  bool damped_projection = false;

  void validate() const;
};

enum class AanPhase { kStart, kReached, kSteady, kMovingAway, kClosingIn };
std::string_view to_string(AanPhase phase);

struct AanState {
  AanPhase phase = AanPhase::kStart;
  double k = 0.0;
  long tau = 0;  // iterations spent in the current phase

  friend bool operator==(const AanState&, const AanState&) = default;
};

struct GuidanceForce {
  CartesianPoint vec = CartesianPoint::Zero();
  double magnitude = 0.0;
  CartesianPoint direction = CartesianPoint::Zero();

  static GuidanceForce zero() { return {}; }
};

/// Average over the last `window` samples (fewer while filling).
class MovingAverage {
 public:
  explicit MovingAverage(std::size_t window);
  double push(double sample);
  double value() const;
  std::size_t size() const { return samples_.size(); }
  std::size_t window() const { return window_; }
  void reset() { samples_.clear(); }

 private:
  std::size_t window_;
  std::deque<double> samples_;
};

CartesianPoint resolve_desired(ParadigmKind kind, const CartesianPoint& command,
                               const CartesianPoint& goal);

struct GoalDirection {
  CartesianPoint unit = CartesianPoint::Zero();  // zero inside the deadband
  double distance = 0.0;
};

GoalDirection guidance_direction(const CartesianPoint& ee, const CartesianPoint& goal,
                                 double th_distance);

/// Scales `f` so its norm never exceeds `limit`; non-finite input yields zero.
CartesianPoint clamp_norm(const CartesianPoint& f, double limit);

std::pair<AanState, GuidanceForce> aan_update(const AanState& state, double distance,
                                              double distance_rate,
                                              const CartesianPoint& direction,
                                              const ParadigmConfig& config, double dt);

GuidanceForce fixed_assistance_force(const CartesianPoint& ee,
                                     const CartesianPoint& ee_velocity,
                                     const CartesianPoint& goal, const ParadigmConfig& config,
                                     MovingAverage& filter);

double estimate_goal_rate(double m_now, double m_prev, double dt, MovingAverage& smoother);

/// Per-trial guidance state: AAN machine, fixed-assistance filter and the
/// goal-distance rate estimator.
class GuidanceEngine {
 public:
  explicit GuidanceEngine(const ParadigmConfig& config);

  GuidanceForce update(const CartesianPoint& ee, const CartesianPoint& ee_velocity,
                       const CartesianPoint& goal, double dt);

  const AanState& aan() const { return aan_; }
  /// Stiffness currently in effect (fixed k, AAN k, or 0).
  double stiffness() const;
  double distance_rate() const { return last_rate_; }

 private:
  ParadigmConfig config_;
  AanState aan_;
  MovingAverage force_filter_;
  MovingAverage rate_smoother_;
  std::optional<CartesianPoint> last_goal_;
  double last_distance_ = 0.0;
  double last_rate_ = 0.0;
};

}  // namespace vine::paradigms
