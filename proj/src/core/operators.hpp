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

#include "core/paradigms.hpp"
#include "core/task.hpp"
#include "core/types.hpp"

#include <cstdint>
#include <deque>
#include <random>
#include <string>

namespace vine::operators {

/// Behavioral parameters of a synthetic operator.
struct OperatorProfile {
  std::string name = "custom";
  double perception_noise_std = 0.0;  // m per axis, on the perceived goal
  double fixation_time = 1.0;         // s, mean time between goal re-estimates
  double max_speed = 0.1;             // m/s
  double approach_gain = 2.0;         // 1/s, slows the hand near the goal
  double reaction_delay = 0.25;       // s
  double pause_rate = 0.0;            // pauses per second
  double pause_duration = 0.0;        // s
  double compliance_gain = 0.0;       // m/s per N of guidance
  double button_accuracy_radius = 0.01;  // m
  double settle_speed = 0.01;         // m/s, tip speed below which a release is attempted
  double search_timeout = 0.5;        // s near a goal without success before re-looking
  double orientation_time = 0.0;      // s, mean hesitation after the goal changes
  double search_focus = 1.0;          // noise scale applied after each failed search
  double guidance_trust = 0.0;        // m per N s: felt force shifts the believed goal

  void validate(double f_max) const;
};

OperatorProfile expert_profile();
OperatorProfile naive_profile();

/// What the operator sees at one instant (before reaction delay).
struct PerceivedState {
  CartesianPoint tip = CartesianPoint::Zero();
  CartesianPoint tip_velocity = CartesianPoint::Zero();
  CartesianPoint goal = CartesianPoint::Zero();
  task::Phase phase = task::Phase::kGraspItem;
  std::size_t item_index = 0;
  bool item_attached = false;  // visible: an item hangs from the gripper
};

struct Buttons {
  bool inflate = false;
  bool declare = false;

  friend bool operator==(const Buttons&, const Buttons&) = default;
};

struct OperatorOutput {
  CartesianPoint command = CartesianPoint::Zero();
  Buttons buttons;
};

/// Deterministic operator emitting a haptic-proxy command and button edges
/// each tick. All randomness comes from the seeded engine.
class SyntheticOperator {
 public:
  SyntheticOperator(OperatorProfile profile, const CartesianPoint& initial_command,
                    std::uint64_t seed);

  OperatorOutput tick(const PerceivedState& now, const paradigms::GuidanceForce& force,
                      double dt);

  const CartesianPoint& command() const { return command_; }
  bool paused() const { return pause_left_ > 0.0; }
  const CartesianPoint& perceived_goal_offset() const { return noise_; }

 private:
  void refixate();
  void sample_noise();

  OperatorProfile profile_;
  CartesianPoint command_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::deque<PerceivedState> history_;
  CartesianPoint noise_ = CartesianPoint::Zero();
  CartesianPoint last_goal_ = CartesianPoint::Constant(1e9);
  double fixation_left_ = 0.0;
  double pause_left_ = 0.0;
  double near_time_ = 0.0;
  double noise_scale_ = 1.0;  // shrinks while searching, restored on a new goal
  // Phase/item pair a button was last pressed for; prevents repeat presses.
  int declared_key_ = -1;
  int inflated_key_ = -1;
  bool saw_attached_ = false;
};

}  // namespace vine::operators
