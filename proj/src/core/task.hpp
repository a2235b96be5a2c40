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
#include "core/plant.hpp"
#include "core/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vine::task {

enum class Phase { kGraspItem, kLift, kPlaceTarget, kDone };

struct TaskConfig {
  double lift_height = 0.15;     // m
  double lift_tolerance = 0.02;  // m
};

struct GoalSelectionState {
  Phase phase = Phase::kGraspItem;
  std::size_t item_index = 0;  // zero-based; displayed one-based
  CartesianPoint goal = CartesianPoint::Zero();
  bool holding = false;        // operator-declared, never sensed
  Phase after_lift = Phase::kPlaceTarget;
  double lift_entry_z = 0.0;

  friend bool operator==(const GoalSelectionState&, const GoalSelectionState&) = default;
};

/// e.g. "grasp_item(1)", "lift", "place_target(2)", "done".
std::string phase_label(const GoalSelectionState& state);

struct GoalEvents {
  bool grasp_declared = false;
  bool release_declared = false;
};

struct GoalStep {
  GoalSelectionState state;
  std::vector<std::string> ignored;  // out-of-order declarations
};

GoalSelectionState initial_goal_state(const plant::World& world);

GoalStep goal_step(const GoalSelectionState& state, const GoalEvents& events,
                   const CartesianPoint& ee, paradigms::ParadigmKind kind,
                   const plant::World& world, const TaskConfig& config = {});

struct Drop {
  int item_id = 0;
  double x = 0.0;
  double y = 0.0;
};

/// One row of the per-tick log. Row 0 is the initial state at t = 0.
struct TraceTick {
  double t = 0.0;
  CartesianPoint c = CartesianPoint::Zero();
  CartesianPoint ee = CartesianPoint::Zero();
  CartesianPoint d = CartesianPoint::Zero();
  CartesianPoint g = CartesianPoint::Zero();
  CartesianPoint f = CartesianPoint::Zero();
  double k = 0.0;
  std::string phase;
  bool inflate = false;
  bool declare = false;
  std::vector<std::string> events;
  std::optional<Drop> drop;
};

struct TrialRecord {
  bool completed = false;
  double completion_time = 0.0;    // T, s
  double trajectory_length = 0.0;  // L, m
  double mean_assistance = 0.0;    // H, N (time average)
  double assistance_per_iteration = 0.0;  // N per iteration
  double precision = 0.0;          // P, m
  std::vector<double> placement_errors;  // per item, planar, at release
  std::vector<TraceTick> trace;
};

/// Metrics of a trace; a trial is complete when its last row is "done".
/// Items never released count with their resting position.
TrialRecord compute_metrics(std::vector<TraceTick> trace, const plant::World& world);

}  // namespace vine::task
