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

#include "core/config.hpp"
#include "core/kinematics.hpp"
#include "core/operators.hpp"
#include "core/paradigms.hpp"
#include "core/plant.hpp"
#include "core/task.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace vine::harness {

/// Operator input for one tick when it comes from outside the simulator.
struct TickInput {
  CartesianPoint command = CartesianPoint::Zero();
  operators::Buttons buttons;
};

/// The fixed-step trial loop. Each step runs operator, paradigm composition,
/// guidance, error evaluation, motor control, plant, gripper and goal
/// selection in that order.
class TrialLoop {
 public:
  TrialLoop(SimConfig config, std::uint64_t seed);

  /// Advances one tick. An external input overrides the synthetic operator;
  /// without either the previous command is held and no button is pressed.
  const task::TraceTick& step(const std::optional<TickInput>& external = std::nullopt);

  bool done() const { return goal_.phase == task::Phase::kDone; }
  bool timed_out() const;
  bool finished() const { return done() || timed_out(); }
  std::uint64_t ticks() const { return tick_; }
  double time() const;

  const SimConfig& config() const { return config_; }
  std::uint64_t seed() const { return seed_; }
  const plant::RobotState& robot() const { return robot_; }
  const std::vector<plant::ItemState>& items() const { return items_; }
  const task::GoalSelectionState& goal() const { return goal_; }
  const paradigms::GuidanceForce& force() const { return force_; }
  double stiffness() const { return guidance_.stiffness(); }
  const CartesianPoint& command() const { return command_; }
  const CartesianPoint& desired() const { return desired_; }
  const std::vector<task::TraceTick>& trace() const { return trace_; }

  /// Metric bundle over the trace so far.
  task::TrialRecord record() const;

 private:
  SimConfig config_;
  std::uint64_t seed_;
  double dt_;
  std::uint64_t tick_ = 0;
  plant::RobotState robot_;
  std::vector<plant::ItemState> items_;
  task::GoalSelectionState goal_;
  paradigms::GuidanceEngine guidance_;
  std::optional<operators::SyntheticOperator> operator_;
  paradigms::GuidanceForce force_;
  CartesianPoint command_;
  CartesianPoint desired_;
  MotorVector psi_prev_;
  MotorVector steering_prev_;
  std::vector<task::TraceTick> trace_;
};

task::TrialRecord run_trial(const SimConfig& config, std::uint64_t seed);

/// Runs a trial driven by recorded per-tick inputs; stops when the inputs
/// run out or the trial finishes.
task::TrialRecord replay_inputs(const SimConfig& config, std::uint64_t seed,
                                const std::vector<TickInput>& inputs);

// --- trial exports -------------------------------------------------------

/// Column names of the per-trial metrics row.
std::string record_csv_header();
std::string record_csv_row(const task::TrialRecord& record, const std::string& trial_id,
                           std::string_view paradigm, std::string_view operator_name,
                           std::uint64_t seed);

/// JSONL trace: a header line (config, seed), one line per tick, and a
/// summary line with the metrics.
std::string trace_to_jsonl(const task::TrialRecord& record, const SimConfig& config,
                           std::uint64_t seed);
nlohmann::json record_summary_json(const task::TrialRecord& record);

struct LoadedTrace {
  SimConfig config;
  std::uint64_t seed = 0;
  std::vector<TickInput> inputs;
  nlohmann::json summary;
};

LoadedTrace parse_trace_jsonl(const std::string& text);
LoadedTrace load_trace(const std::string& path);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace vine::harness
