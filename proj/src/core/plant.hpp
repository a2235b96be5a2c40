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

#include <optional>
#include <string>
#include <vector>

namespace vine::plant {

struct PlantConfig {
  double steering_rate_limit = 0.15;   // rad/s per motor axis
  double eversion_rate_limit = 0.10;   // m/s
  double passive_growth = 0.002;       // m/s while pressurized
  bool pressurized = true;
  double min_length = 0.05;            // m
  double capture_radius = 0.015;       // m
  double release_time = 0.3;           // s
};

struct GripperState {
  bool inflated = false;
  std::optional<int> held_item;
  double release_timer = 0.0;  // s until the held item drops

  friend bool operator==(const GripperState&, const GripperState&) = default;
};

struct RobotState {
  MotorVector motor;
  CartesianPoint tip = CartesianPoint::Zero();
  CartesianPoint tip_velocity = CartesianPoint::Zero();
  MotorVector motor_rate;  // last applied rates, after limiting
  GripperState gripper;
};

/// State at rest for a motor configuration.
RobotState make_state(const MotorVector& motor);

struct Placement {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
};

/// Static snapshot of the task layout, measured once before the trial.
struct World {
  std::vector<Placement> items;
  std::vector<Placement> targets;
  double table_z = -0.7;
  double base_height = 0.7;
  double item_side = 0.03;

  /// Point where the tip touches the top face of a resting item.
  CartesianPoint item_grasp_point(std::size_t index) const;
  /// Tip position that rests a held item on a target.
  CartesianPoint target_place_point(std::size_t index) const;
};

/// Two items and two targets, every consecutive leg 0.30 m apart.
World default_world();
World world_from_json(const std::string& text);
World load_world(const std::string& path);
std::string world_to_json(const World& world);

/// Mutable physical item pose. Pose is the bottom-face center.
struct ItemState {
  int id = 0;
  CartesianPoint pose = CartesianPoint::Zero();
  bool placed = false;  // released at least once; no longer attracted

  friend bool operator==(const ItemState&, const ItemState&) = default;
};

std::vector<ItemState> initial_items(const World& world);

/// Lowest tip height allowed at the current gripper load.
double support_height(const World& world, const GripperState& gripper);

/// Integrates clamped motor rates over dt and recomputes the tip. When
/// `support_z` is given, growth stops once the tip would sink below it.
RobotState step_plant(const RobotState& state, const MotorVector& command, double dt,
                      const PlantConfig& config,
                      std::optional<double> support_z = std::nullopt);

struct GripperEvent {
  enum class Kind { kCaptured, kReleaseStarted, kDropped };
  Kind kind;
  int item_id;
};

/// Advances the soft-magnetic gripper. Items resting within the capture
/// radius of a deflated, empty gripper snap to the tip; pressing inflate while
/// holding starts the release timer, after which the item drops vertically.
std::optional<GripperEvent> step_gripper(RobotState& state, std::vector<ItemState>& items,
                                         const World& world, bool inflate_pressed,
                                         double dt, const PlantConfig& config);

}  // namespace vine::plant
