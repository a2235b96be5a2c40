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

#include "core/operators.hpp"

#include <algorithm>
#include <cmath>

namespace vine::operators {

void OperatorProfile::validate(double f_max) const {
  const double values[] = {perception_noise_std, fixation_time, max_speed, approach_gain,
                           reaction_delay, pause_rate, pause_duration, compliance_gain,
                           button_accuracy_radius, settle_speed, search_timeout,
                           orientation_time, search_focus, guidance_trust};
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "operator parameters must be non-negative: " + name);
    }
  }
  if (search_focus > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "operator search_focus must be <= 1: " + name);
  }
  if (compliance_gain * f_max > max_speed + 1e-12) {
    throw Error(ErrorCode::kInvalidArgument,
                "operator compliance_gain * f_max exceeds max_speed: " + name);
  }
}

OperatorProfile expert_profile() {
  OperatorProfile p;
  p.name = "expert";
  p.perception_noise_std = 0.005;
  p.fixation_time = 1.0;
  p.max_speed = 0.10;
  p.approach_gain = 2.0;
  p.reaction_delay = 0.25;
  p.pause_rate = 0.0;
  p.pause_duration = 0.0;
  p.compliance_gain = 0.005;
  p.button_accuracy_radius = 0.01;
  p.settle_speed = 0.005;
  p.search_timeout = 0.5;
  return p;
}

OperatorProfile naive_profile() {
  OperatorProfile p;
  p.name = "naive";
  p.perception_noise_std = 0.03;
  p.fixation_time = 1.0;
  p.max_speed = 0.08;
  p.approach_gain = 1.5;
  p.reaction_delay = 0.4;
  p.pause_rate = 0.2;
  p.pause_duration = 5.0;
  // A stiff, hesitant hand: it barely yields to the rendered force, so guidance
  // matters mostly while the operator is still looking for the goal.
  p.compliance_gain = 0.0015;
  p.button_accuracy_radius = 0.02;
  p.settle_speed = 0.03;
  p.search_timeout = 1.0;
  p.orientation_time = 6.0;
  p.guidance_trust = 0.02;
  return p;
}

SyntheticOperator::SyntheticOperator(OperatorProfile profile,
                                     const CartesianPoint& initial_command, std::uint64_t seed)
    : profile_(std::move(profile)), command_(initial_command), rng_(seed) {}

void SyntheticOperator::sample_noise() {
  const double s = profile_.perception_noise_std * noise_scale_;
  noise_ = {s * gauss_(rng_), s * gauss_(rng_), s * gauss_(rng_)};
}

void SyntheticOperator::refixate() {
  sample_noise();
  // Exponential fixation durations: most glances are short, a few linger.
  const double u = uniform_(rng_);
  fixation_left_ = -profile_.fixation_time * std::log(1.0 - u);
  near_time_ = 0.0;
}

OperatorOutput SyntheticOperator::tick(const PerceivedState& now,
                                       const paradigms::GuidanceForce& force, double dt) {
  const auto delay_ticks = static_cast<std::size_t>(std::lround(profile_.reaction_delay / dt));
  history_.push_back(now);
  while (history_.size() > delay_ticks + 1) history_.pop_front();
  const PerceivedState& seen = history_.front();

  if (seen.goal != last_goal_) {
    last_goal_ = seen.goal;
    noise_scale_ = 1.0;
    refixate();
    // Finding a newly highlighted item or target takes a moment; the hand rests
    // meanwhile. A lift goal sits straight above the tip and needs no search.
    if (profile_.orientation_time > 0.0 && seen.phase != task::Phase::kLift) {
      pause_left_ = std::max(pause_left_, profile_.orientation_time * (0.5 + uniform_(rng_)));
    }
  } else {
    fixation_left_ -= dt;
    if (fixation_left_ <= 0.0) refixate();
  }

  if (pause_left_ > 0.0) {
    pause_left_ -= dt;
  } else if (profile_.pause_rate > 0.0 && uniform_(rng_) < profile_.pause_rate * dt) {
    pause_left_ = profile_.pause_duration * (0.5 + uniform_(rng_));
  }

  CartesianPoint aim = seen.goal + noise_;
  // Raising the tip past a lift mark is harmless, so nobody stops short of it.
  if (seen.phase == task::Phase::kLift) aim.z() = seen.goal.z() + std::abs(noise_.z());
  CartesianPoint velocity = CartesianPoint::Zero();
  if (pause_left_ <= 0.0) {
    const CartesianPoint to_aim = aim - command_;
    const double dist = to_aim.norm();
    if (dist > 0.0) {
      velocity = to_aim / dist * std::min(profile_.max_speed, profile_.approach_gain * dist);
    }
  }
  // The hand yields to the rendered force even while the operator hesitates,
  // and a felt push also nudges where the operator believes the goal is.
  velocity += profile_.compliance_gain * force.vec;
  noise_ += profile_.guidance_trust * force.vec * dt;
  command_ += velocity * dt;

  OperatorOutput out;
  out.command = command_;

  const int key = static_cast<int>(seen.phase) * 100 + static_cast<int>(seen.item_index);
  const double believed = (seen.tip - aim).norm();
  const bool near = believed < profile_.button_accuracy_radius;
  // Released items drop straight down, so placing only needs overhead alignment.
  const bool above = (seen.tip - aim).head<2>().norm() < profile_.button_accuracy_radius;
  const bool settled = seen.tip_velocity.norm() < profile_.settle_speed;

  switch (seen.phase) {
    case task::Phase::kGraspItem:
      if (seen.item_attached) {
        if (declared_key_ != key) {
          out.buttons.declare = true;
          declared_key_ = key;
        }
      } else if (near && settled) {
        near_time_ += dt;
        if (near_time_ >= profile_.search_timeout) {
          // Nothing attached although the tip looks right: look more carefully.
          noise_scale_ *= profile_.search_focus;
          refixate();
        }
      } else {
        near_time_ = 0.0;
      }
      break;
    case task::Phase::kPlaceTarget:
      if (seen.item_attached) saw_attached_ = true;
      if (inflated_key_ != key && seen.item_attached && above && settled) {
        out.buttons.inflate = true;
        inflated_key_ = key;
      }
      if (inflated_key_ == key && saw_attached_ && !seen.item_attached && declared_key_ != key) {
        out.buttons.declare = true;
        declared_key_ = key;
        saw_attached_ = false;
      }
      break;
    case task::Phase::kLift:
    case task::Phase::kDone:
      break;
  }
  return out;
}

}  // namespace vine::operators
