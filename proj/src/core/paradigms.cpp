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

#include "core/paradigms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vine::paradigms {

std::string_view to_token(ParadigmKind kind) {
  switch (kind) {
    case ParadigmKind::kFullTeleoperation: return "teleop";
    case ParadigmKind::kAssistAsNeeded: return "aan";
    case ParadigmKind::kFixedAssistance: return "fixed";
    case ParadigmKind::kManualSteeringAutonomousEversion: return "msae";
    case ParadigmKind::kAutonomousSteeringManualEversion: return "asme";
    case ParadigmKind::kMostlyAutonomous: return "auto";
  }
  return "teleop";
}

std::optional<ParadigmKind> parse_kind(std::string_view token) {
  for (auto k : {ParadigmKind::kFullTeleoperation, ParadigmKind::kAssistAsNeeded,
                 ParadigmKind::kFixedAssistance, ParadigmKind::kManualSteeringAutonomousEversion,
                 ParadigmKind::kAutonomousSteeringManualEversion, ParadigmKind::kMostlyAutonomous}) {
    if (to_token(k) == token) return k;
  }
  return std::nullopt;
}

bool automates_growth(ParadigmKind kind) {
  return kind == ParadigmKind::kManualSteeringAutonomousEversion ||
         kind == ParadigmKind::kAutonomousSteeringManualEversion ||
         kind == ParadigmKind::kMostlyAutonomous;
}

bool renders_guidance(ParadigmKind kind) {
  return kind == ParadigmKind::kAssistAsNeeded || kind == ParadigmKind::kFixedAssistance;
}

void ParadigmConfig::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorCode::kInvalidArgument, what); };
  if (!(f_max > 0.0 && f_max <= 7.0)) fail("f_max must lie in (0, 7] N");
  if (!(k_max > 0.0)) fail("k_max must be positive");
  if (!(delta > 0.0)) fail("delta must be positive");
  if (!(xi_steady >= 0.0 && xi_closing >= 0.0 && xi_away >= 0.0)) fail("xi must be non-negative");
  if (!(th_distance > 0.0)) fail("th_D must be positive");
  if (!(th_rate > 0.0)) fail("th_M must be positive");
  if (!(k_fixed >= 0.0 && b_fixed >= 0.0)) fail("fixed k and b must be non-negative");
  if (filter_len == 0 || rate_window == 0) fail("filter windows must be non-empty");
}

std::string_view to_string(AanPhase phase) {
  switch (phase) {
    case AanPhase::kStart: return "start";
    case AanPhase::kReached: return "reached";
    case AanPhase::kSteady: return "steady";
    case AanPhase::kMovingAway: return "moving_away";
    case AanPhase::kClosingIn: return "closing_in";
  }
  return "start";
}

MovingAverage::MovingAverage(std::size_t window) : window_(std::max<std::size_t>(window, 1)) {}

double MovingAverage::push(double sample) {
  samples_.push_back(sample);
  if (samples_.size() > window_) samples_.pop_front();
  return value();
}

double MovingAverage::value() const {
  if (samples_.empty()) return 0.0;
  return std::accumulate(samples_.begin(), samples_.end(), 0.0) /
         static_cast<double>(samples_.size());
}

CartesianPoint resolve_desired(ParadigmKind kind, const CartesianPoint& command,
                               const CartesianPoint& goal) {
  switch (kind) {
    case ParadigmKind::kFullTeleoperation:
    case ParadigmKind::kAssistAsNeeded:
    case ParadigmKind::kFixedAssistance:
      return command;
    case ParadigmKind::kManualSteeringAutonomousEversion:
      return {command.x(), command.y(), goal.z()};
    case ParadigmKind::kAutonomousSteeringManualEversion:
      return {goal.x(), goal.y(), command.z()};
    case ParadigmKind::kMostlyAutonomous:
      return goal;
  }
  return command;
}

GoalDirection guidance_direction(const CartesianPoint& ee, const CartesianPoint& goal,
                                 double th_distance) {
  GoalDirection out;
  const CartesianPoint delta = goal - ee;
  out.distance = delta.norm();
  if (std::isfinite(out.distance) && out.distance >= th_distance && out.distance > 0.0) {
    out.unit = delta / out.distance;
  }
  return out;
}

CartesianPoint clamp_norm(const CartesianPoint& f, double limit) {
  if (!f.allFinite()) return CartesianPoint::Zero();
  double n = f.norm();
  if (!std::isfinite(n)) return CartesianPoint::Zero();
  if (n <= limit) return f;
  CartesianPoint out = f * (limit / n);
  // Rounding can leave the norm one ulp above the limit.
  while (out.norm() > limit) out *= std::nextafter(1.0, 0.0);
  return out;
}

namespace {

long iterations(double seconds, double dt) { return std::lround(seconds / dt); }

AanPhase classify(double distance, double rate, const ParadigmConfig& c) {
  if (distance < c.th_distance) return AanPhase::kReached;
  if (std::abs(rate) < c.th_rate) return AanPhase::kSteady;
  return rate > 0.0 ? AanPhase::kMovingAway : AanPhase::kClosingIn;
}

GuidanceForce make_force(double magnitude, const CartesianPoint& direction, double f_max) {
  GuidanceForce f;
  f.direction = direction;
  f.vec = clamp_norm(direction * magnitude, f_max);
  f.magnitude = f.vec.norm();
  if (f.magnitude == 0.0) f.direction = CartesianPoint::Zero();
  return f;
}

}  // namespace

std::pair<AanState, GuidanceForce> aan_update(const AanState& state, double distance,
                                              double distance_rate,
                                              const CartesianPoint& direction,
                                              const ParadigmConfig& config, double dt) {
  AanState next = state;
  const AanPhase phase = classify(distance, distance_rate, config);
  if (phase != state.phase) {
    next.phase = phase;
    next.tau = 0;
  } else {
    ++next.tau;
  }

  const double step = config.delta * dt;
  auto grow = [&] { next.k = std::min(config.k_max, next.k + step); };
  auto decay = [&] { next.k = std::max(0.0, next.k - step); };
  switch (phase) {
    case AanPhase::kReached: decay(); break;
    case AanPhase::kSteady:
      if (next.tau >= iterations(config.xi_steady, dt)) grow();
      break;
    case AanPhase::kMovingAway:
      if (next.tau >= iterations(config.xi_away, dt)) grow();
      break;
    case AanPhase::kClosingIn:
      if (next.tau >= iterations(config.xi_closing, dt)) decay();
      break;
    case AanPhase::kStart: break;
  }

  const double magnitude = std::isfinite(distance) ? std::min(next.k * distance, config.f_max) : 0.0;
  return {next, make_force(magnitude, direction, config.f_max)};
}

GuidanceForce fixed_assistance_force(const CartesianPoint& ee,
                                     const CartesianPoint& ee_velocity,
                                     const CartesianPoint& goal, const ParadigmConfig& config,
                                     MovingAverage& filter) {
  const GoalDirection dir = guidance_direction(ee, goal, config.th_distance);
  double damper = config.b_fixed * ee_velocity.norm();
  if (config.damped_projection) damper = -config.b_fixed * ee_velocity.dot(dir.unit);
  double raw = config.k_fixed * dir.distance + damper;
  if (!std::isfinite(raw)) raw = config.f_max;
  const double smoothed = std::clamp(filter.push(raw), 0.0, config.f_max);
  return make_force(smoothed, dir.unit, config.f_max);
}

double estimate_goal_rate(double m_now, double m_prev, double dt, MovingAverage& smoother) {
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dt must be positive");
  return smoother.push((m_now - m_prev) / dt);
}

GuidanceEngine::GuidanceEngine(const ParadigmConfig& config)
    : config_(config), force_filter_(config.filter_len), rate_smoother_(config.rate_window) {}

double GuidanceEngine::stiffness() const {
  switch (config_.kind) {
    case ParadigmKind::kAssistAsNeeded: return aan_.k;
    case ParadigmKind::kFixedAssistance: return config_.k_fixed;
    default: return 0.0;
  }
}

GuidanceForce GuidanceEngine::update(const CartesianPoint& ee, const CartesianPoint& ee_velocity,
                                     const CartesianPoint& goal, double dt) {
  const GoalDirection dir = guidance_direction(ee, goal, config_.th_distance);
  // A goal switch is a jump in m, not operator motion.
  if (!last_goal_ || *last_goal_ != goal) {
    rate_smoother_.reset();
    last_distance_ = dir.distance;
    last_goal_ = goal;
  }
  last_rate_ = estimate_goal_rate(dir.distance, last_distance_, dt, rate_smoother_);
  last_distance_ = dir.distance;

  switch (config_.kind) {
    case ParadigmKind::kAssistAsNeeded: {
      auto [state, force] = aan_update(aan_, dir.distance, last_rate_, dir.unit, config_, dt);
      aan_ = state;
      return force;
    }
    case ParadigmKind::kFixedAssistance:
      return fixed_assistance_force(ee, ee_velocity, goal, config_, force_filter_);
    default:
      return GuidanceForce::zero();
  }
}

}  // namespace vine::paradigms
