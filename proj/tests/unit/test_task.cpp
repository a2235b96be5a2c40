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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace vine;
using namespace vine::task;
using paradigms::ParadigmKind;
using Catch::Matchers::WithinAbs;

namespace {

const plant::World kWorld = plant::default_world();

GoalSelectionState step(const GoalSelectionState& s, bool grasp, bool release,
                        const CartesianPoint& ee, ParadigmKind kind) {
  return goal_step(s, {grasp, release}, ee, kind, kWorld).state;
}

TraceTick tick_at(double t, const CartesianPoint& ee, const CartesianPoint& f = CartesianPoint::Zero()) {
  TraceTick k;
  k.t = t;
  k.ee = ee;
  k.f = f;
  k.phase = "grasp_item(1)";
  return k;
}

}  // namespace

TEST_CASE("initial goal is the first item", "[task]") {
  const auto s = initial_goal_state(kWorld);
  CHECK(s.phase == Phase::kGraspItem);
  CHECK(s.item_index == 0);
  CHECK(s.goal == kWorld.item_grasp_point(0));
  CHECK(phase_label(s) == "grasp_item(1)");
}

TEST_CASE("manual growth skips the lift", "[task]") {
  const CartesianPoint ee{-0.15, 0.15, -0.67};
  auto s = step(initial_goal_state(kWorld), true, false, ee, ParadigmKind::kFullTeleoperation);
  CHECK(s.phase == Phase::kPlaceTarget);
  CHECK(s.item_index == 0);
  CHECK(s.holding);
  CHECK(s.goal == kWorld.target_place_point(0));
  CHECK(phase_label(s) == "place_target(1)");
}

TEST_CASE("automated growth lifts above the grasp point", "[task]") {
  const CartesianPoint ee{-0.15, 0.15, -0.67};
  for (auto kind : {ParadigmKind::kAutonomousSteeringManualEversion,
                    ParadigmKind::kManualSteeringAutonomousEversion,
                    ParadigmKind::kMostlyAutonomous}) {
    auto s = step(initial_goal_state(kWorld), true, false, ee, kind);
    CHECK(s.phase == Phase::kLift);
    CHECK((s.goal - (ee + CartesianPoint(0, 0, 0.15))).norm() < 1e-12);

    // Not high enough yet.
    auto still = step(s, false, false, ee + CartesianPoint(0, 0, 0.12), kind);
    CHECK(still.phase == Phase::kLift);
    // Within the 0.02 m tolerance of the lift height.
    auto up = step(s, false, false, ee + CartesianPoint(0, 0, 0.131), kind);
    CHECK(up.phase == Phase::kPlaceTarget);
    CHECK(up.goal == kWorld.target_place_point(0));
  }
}

TEST_CASE("the full phase sequence", "[task]") {
  const CartesianPoint ee{0, 0, -0.6};
  SECTION("teleoperation") {
    auto s = initial_goal_state(kWorld);
    s = step(s, true, false, ee, ParadigmKind::kFullTeleoperation);
    CHECK(phase_label(s) == "place_target(1)");
    s = step(s, false, true, ee, ParadigmKind::kFullTeleoperation);
    CHECK(phase_label(s) == "grasp_item(2)");
    CHECK(s.goal == kWorld.item_grasp_point(1));
    s = step(s, true, false, ee, ParadigmKind::kFullTeleoperation);
    CHECK(phase_label(s) == "place_target(2)");
    s = step(s, false, true, ee, ParadigmKind::kFullTeleoperation);
    CHECK(s.phase == Phase::kDone);
    CHECK(phase_label(s) == "done");
  }
  SECTION("mostly autonomous passes through a lift after each declaration") {
    const auto kind = ParadigmKind::kMostlyAutonomous;
    const CartesianPoint up = ee + CartesianPoint(0, 0, 0.2);
    auto s = initial_goal_state(kWorld);
    s = step(s, true, false, ee, kind);
    CHECK(s.phase == Phase::kLift);
    s = step(s, false, false, up, kind);
    CHECK(phase_label(s) == "place_target(1)");
    s = step(s, false, true, ee, kind);
    CHECK(s.phase == Phase::kLift);
    s = step(s, false, false, up, kind);
    CHECK(phase_label(s) == "grasp_item(2)");
    s = step(s, true, false, ee, kind);
    s = step(s, false, false, up, kind);
    CHECK(phase_label(s) == "place_target(2)");
    s = step(s, false, true, ee, kind);
    CHECK(s.phase == Phase::kDone);
  }
}

TEST_CASE("out-of-order declarations are ignored and reported", "[task]") {
  const CartesianPoint ee{0, 0, -0.6};
  auto r = goal_step(initial_goal_state(kWorld), {false, true}, ee,
                     ParadigmKind::kFullTeleoperation, kWorld);
  CHECK(r.state == initial_goal_state(kWorld));
  REQUIRE(r.ignored.size() == 1);

  auto placing = step(initial_goal_state(kWorld), true, false, ee, ParadigmKind::kFullTeleoperation);
  r = goal_step(placing, {true, false}, ee, ParadigmKind::kFullTeleoperation, kWorld);
  CHECK(r.state == placing);
  CHECK(r.ignored.size() == 1);

  auto lifting = step(initial_goal_state(kWorld), true, false, ee, ParadigmKind::kMostlyAutonomous);
  r = goal_step(lifting, {true, true}, ee, ParadigmKind::kMostlyAutonomous, kWorld);
  CHECK(r.state.phase == Phase::kLift);
  CHECK(r.ignored.size() == 1);
}

TEST_CASE("metrics of a stationary robot", "[task]") {
  std::vector<TraceTick> trace;
  for (int i = 0; i <= 100; ++i) trace.push_back(tick_at(i * 0.01, {0, 0, -0.5}));
  const auto r = compute_metrics(trace, kWorld);
  CHECK_FALSE(r.completed);
  CHECK(r.trajectory_length == 0.0);
  CHECK(r.mean_assistance == 0.0);
  CHECK_THAT(r.completion_time, WithinAbs(1.0, 1e-12));
  // Items never moved: each rests 0.30 m from its target.
  REQUIRE(r.placement_errors.size() == 2);
  CHECK_THAT(r.placement_errors[0], WithinAbs(0.30, 1e-12));
  CHECK_THAT(r.precision, WithinAbs(0.30, 1e-12));
}

TEST_CASE("trajectory length of a straight line", "[task]") {
  std::vector<TraceTick> trace;
  for (int i = 0; i <= 500; ++i) trace.push_back(tick_at(i * 0.01, {0.1 * i * 0.01, 0, -0.5}));
  CHECK_THAT(compute_metrics(trace, kWorld).trajectory_length, WithinAbs(0.5, 1e-9));
}

TEST_CASE("mean assistance of a constant force", "[task]") {
  std::vector<TraceTick> trace;
  for (int i = 0; i <= 700; ++i) trace.push_back(tick_at(i * 0.01, {0, 0, -0.5}, {0, 2.0, 0}));
  const auto r = compute_metrics(trace, kWorld);
  CHECK_THAT(r.mean_assistance, WithinAbs(2.0, 1e-9));
  CHECK_THAT(r.assistance_per_iteration, WithinAbs(2.0, 1e-9));
}

TEST_CASE("precision from release positions", "[task]") {
  std::vector<TraceTick> trace;
  trace.push_back(tick_at(0.0, {0, 0, -0.5}));
  TraceTick a = tick_at(10.0, {0, 0, -0.5});
  a.drop = Drop{1, kWorld.targets[0].x, kWorld.targets[0].y};
  trace.push_back(a);
  TraceTick b = tick_at(20.0, {0, 0, -0.5});
  b.drop = Drop{2, kWorld.targets[1].x, kWorld.targets[1].y};
  b.phase = "done";
  trace.push_back(b);
  auto r = compute_metrics(trace, kWorld);
  CHECK(r.completed);
  CHECK(r.completion_time == 20.0);
  CHECK(r.precision == 0.0);

  // Half of the sum of planar errors; the z of the drop does not enter.
  trace[2].drop = Drop{2, kWorld.targets[1].x + 0.03, kWorld.targets[1].y + 0.04};
  r = compute_metrics(trace, kWorld);
  CHECK_THAT(r.placement_errors[1], WithinAbs(0.05, 1e-12));
  CHECK_THAT(r.precision, WithinAbs(0.025, 1e-12));

  // A second release of the same item replaces the first.
  TraceTick again = tick_at(15.0, {0, 0, -0.5});
  again.drop = Drop{1, kWorld.targets[0].x + 0.01, kWorld.targets[0].y};
  trace.insert(trace.begin() + 2, again);
  r = compute_metrics(trace, kWorld);
  CHECK_THAT(r.placement_errors[0], WithinAbs(0.01, 1e-12));
}

TEST_CASE("metrics are a pure function of the trace", "[task]") {
  std::vector<TraceTick> trace;
  for (int i = 0; i <= 300; ++i) {
    trace.push_back(tick_at(i * 0.01, {std::sin(i * 0.1) * 0.1, 0.0, -0.5}, {0.0, 0.0, i * 0.01}));
  }
  const auto a = compute_metrics(trace, kWorld);
  const auto b = compute_metrics(trace, kWorld);
  CHECK(a.trajectory_length == b.trajectory_length);
  CHECK(a.mean_assistance == b.mean_assistance);
  CHECK(a.precision == b.precision);
}
