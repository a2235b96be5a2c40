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

#include "core/task.hpp"

#include <cmath>

namespace vine::task {

std::string phase_label(const GoalSelectionState& state) {
  const std::string n = std::to_string(state.item_index + 1);
  switch (state.phase) {
    case Phase::kGraspItem: return "grasp_item(" + n + ")";
    case Phase::kLift: return "lift";
    case Phase::kPlaceTarget: return "place_target(" + n + ")";
    case Phase::kDone: return "done";
  }
  return "done";
}

GoalSelectionState initial_goal_state(const plant::World& world) {
  GoalSelectionState s;
  s.goal = world.item_grasp_point(0);
  return s;
}

namespace {

GoalSelectionState enter(Phase phase, std::size_t index, const plant::World& world,
                         GoalSelectionState s) {
  s.phase = phase;
  s.item_index = index;
  if (phase == Phase::kGraspItem) s.goal = world.item_grasp_point(index);
  if (phase == Phase::kPlaceTarget) s.goal = world.target_place_point(index);
  return s;
}

GoalSelectionState enter_lift(Phase next, std::size_t next_index, const CartesianPoint& ee,
                              const TaskConfig& config, GoalSelectionState s) {
  s.phase = Phase::kLift;
  s.after_lift = next;
  s.item_index = next_index;
  s.lift_entry_z = ee.z();
  s.goal = {ee.x(), ee.y(), ee.z() + config.lift_height};
  return s;
}

}  // namespace

GoalStep goal_step(const GoalSelectionState& state, const GoalEvents& events,
                   const CartesianPoint& ee, paradigms::ParadigmKind kind,
                   const plant::World& world, const TaskConfig& config) {
  GoalStep out{state, {}};
  const bool lift = paradigms::automates_growth(kind);
  GoalSelectionState& s = out.state;

  switch (state.phase) {
    case Phase::kGraspItem:
      if (events.release_declared) out.ignored.push_back("release declared while not holding");
      if (events.grasp_declared) {
        s.holding = true;
        s = lift ? enter_lift(Phase::kPlaceTarget, state.item_index, ee, config, s)
                 : enter(Phase::kPlaceTarget, state.item_index, world, s);
      }
      break;
    case Phase::kLift:
      if (events.grasp_declared || events.release_declared) {
        out.ignored.push_back("declaration during lift");
      }
      if (ee.z() >= state.lift_entry_z + config.lift_height - config.lift_tolerance) {
        s = enter(state.after_lift, state.item_index, world, s);
      }
      break;
    case Phase::kPlaceTarget:
      if (events.grasp_declared) out.ignored.push_back("grasp declared while holding");
      if (events.release_declared) {
        s.holding = false;
        const std::size_t next = state.item_index + 1;
        if (next >= world.items.size()) {
          s.phase = Phase::kDone;
        } else {
          s = lift ? enter_lift(Phase::kGraspItem, next, ee, config, s)
                   : enter(Phase::kGraspItem, next, world, s);
        }
      }
      break;
    case Phase::kDone:
      if (events.grasp_declared || events.release_declared) {
        out.ignored.push_back("declaration after completion");
      }
      break;
  }
  return out;
}

TrialRecord compute_metrics(std::vector<TraceTick> trace, const plant::World& world) {
  TrialRecord r;
  r.trace = std::move(trace);
  const auto& tr = r.trace;
  if (tr.empty()) return r;

  r.completed = tr.back().phase == "done";
  r.completion_time = tr.back().t;

  double force_integral = 0.0;
  double force_sum = 0.0;
  for (std::size_t i = 1; i < tr.size(); ++i) {
    r.trajectory_length += (tr[i].ee - tr[i - 1].ee).norm();
    const double fn = tr[i].f.norm();
    force_integral += fn * (tr[i].t - tr[i - 1].t);
    force_sum += fn;
  }
  if (r.completion_time > 0.0) r.mean_assistance = force_integral / r.completion_time;
  if (tr.size() > 1) r.assistance_per_iteration = force_sum / static_cast<double>(tr.size() - 1);

  std::vector<std::optional<Drop>> last_drop(world.items.size());
  for (const auto& tick : tr) {
    if (!tick.drop) continue;
    for (std::size_t i = 0; i < world.items.size(); ++i) {
      if (world.items[i].id == tick.drop->item_id) last_drop[i] = tick.drop;
    }
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < world.items.size(); ++i) {
    const auto& target = world.targets[i];
    const double x = last_drop[i] ? last_drop[i]->x : world.items[i].x;
    const double y = last_drop[i] ? last_drop[i]->y : world.items[i].y;
    const double err = std::hypot(target.x - x, target.y - y);
    r.placement_errors.push_back(err);
    sum += err;
  }
  r.precision = sum / static_cast<double>(world.items.size());
  return r;
}

}  // namespace vine::task
