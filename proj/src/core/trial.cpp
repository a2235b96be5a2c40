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

#include "core/trial.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace vine::harness {

using nlohmann::json;

namespace {

plant::RobotState start_state(const SimConfig& cfg) {
  const CartesianPoint& tip = cfg.harness.start_tip;
  MotorVector m = kinematics::inverse_steering(tip.x(), tip.y());
  m.e = kinematics::eversion_length(tip);
  return plant::make_state(m);
}

std::uint64_t operator_seed(std::uint64_t seed) {
  // splitmix64 finalizer; keeps neighbouring trial seeds decorrelated.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

json vec(const CartesianPoint& p) { return json::array({p.x(), p.y(), p.z()}); }

CartesianPoint read_vec(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

}  // namespace

TrialLoop::TrialLoop(SimConfig config, std::uint64_t seed)
    : config_(std::move(config)),
      seed_(seed),
      dt_(config_.harness.dt()),
      robot_(start_state(config_)),
      items_(plant::initial_items(config_.world)),
      goal_(task::initial_goal_state(config_.world)),
      guidance_(config_.paradigm),
      command_(robot_.tip),
      desired_(robot_.tip) {
  config_.validate();
  if (const auto* profile = config_.active_profile()) {
    operator_.emplace(*profile, robot_.tip, operator_seed(seed));
  }
  task::TraceTick first;
  first.c = command_;
  first.ee = robot_.tip;
  first.d = desired_;
  first.g = goal_.goal;
  first.phase = task::phase_label(goal_);
  trace_.push_back(std::move(first));
}

bool TrialLoop::timed_out() const {
  return static_cast<double>(tick_) * dt_ >= config_.harness.timeout - 1e-9;
}

double TrialLoop::time() const { return static_cast<double>(tick_) * dt_; }

const task::TraceTick& TrialLoop::step(const std::optional<TickInput>& external) {
  task::TraceTick row;
  const auto kind = config_.paradigm.kind;

  operators::Buttons buttons;
  if (external) {
    command_ = external->command;
    buttons = external->buttons;
  } else if (operator_) {
    operators::PerceivedState seen;
    seen.tip = robot_.tip;
    seen.tip_velocity = robot_.tip_velocity;
    seen.goal = goal_.goal;
    seen.phase = goal_.phase;
    seen.item_index = goal_.item_index;
    seen.item_attached = robot_.gripper.held_item.has_value();
    const auto out = operator_->tick(seen, force_, dt_);
    command_ = out.command;
    buttons = out.buttons;
  }

  const CartesianPoint goal = goal_.goal;
  desired_ = paradigms::resolve_desired(kind, command_, goal);
  force_ = guidance_.update(robot_.tip, robot_.tip_velocity, goal, dt_);

  MotorVector psi;
  try {
    const auto eval = kinematics::evaluate_error(desired_, robot_.tip, steering_prev_,
                                                 config_.harness.epsilon);
    psi = eval.psi;
    steering_prev_ = eval.raw_steering;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateTarget) throw;
    row.events.push_back("degenerate_target");
    psi = MotorVector{};
  }
  const double length = kinematics::eversion_length(robot_.tip);
  const MotorVector rate = control::compute_motor_command(psi, psi_prev_, length, config_.control,
                                                          dt_, config_.plant.pressurized);
  psi_prev_ = psi;

  robot_ = plant::step_plant(robot_, rate, dt_, config_.plant,
                             plant::support_height(config_.world, robot_.gripper));
  if (auto ev = plant::step_gripper(robot_, items_, config_.world, buttons.inflate, dt_,
                                    config_.plant)) {
    switch (ev->kind) {
      case plant::GripperEvent::Kind::kCaptured:
        row.events.push_back("captured:" + std::to_string(ev->item_id));
        break;
      case plant::GripperEvent::Kind::kReleaseStarted:
        row.events.push_back("release_started:" + std::to_string(ev->item_id));
        break;
      case plant::GripperEvent::Kind::kDropped:
        row.events.push_back("dropped:" + std::to_string(ev->item_id));
        row.drop = task::Drop{ev->item_id, robot_.tip.x(), robot_.tip.y()};
        break;
    }
  }
  if (buttons.inflate && !row.drop && row.events.empty()) row.events.push_back("inflate_ignored");

  task::GoalEvents events;
  if (buttons.declare) {
    if (goal_.phase == task::Phase::kPlaceTarget) {
      events.release_declared = true;
    } else {
      events.grasp_declared = true;
    }
  }
  auto next = task::goal_step(goal_, events, robot_.tip, kind, config_.world, config_.task);
  for (auto& note : next.ignored) row.events.push_back("ignored: " + note);
  goal_ = next.state;

  ++tick_;
  row.t = time();
  row.c = command_;
  row.ee = robot_.tip;
  row.d = desired_;
  row.g = goal;
  row.f = force_.vec;
  row.k = guidance_.stiffness();
  row.phase = task::phase_label(goal_);
  row.inflate = buttons.inflate;
  row.declare = buttons.declare;
  trace_.push_back(std::move(row));
  return trace_.back();
}

task::TrialRecord TrialLoop::record() const {
  return task::compute_metrics(trace_, config_.world);
}

task::TrialRecord run_trial(const SimConfig& config, std::uint64_t seed) {
  TrialLoop loop(config, seed);
  while (!loop.finished()) loop.step();
  return loop.record();
}

task::TrialRecord replay_inputs(const SimConfig& config, std::uint64_t seed,
                                const std::vector<TickInput>& inputs) {
  SimConfig cfg = config;
  cfg.harness.operator_source = OperatorSource::kNone;
  TrialLoop loop(cfg, seed);
  for (const auto& in : inputs) {
    if (loop.finished()) break;
    loop.step(in);
  }
  return loop.record();
}

std::string record_csv_header() {
  return "trial,paradigm,operator,seed,completed,T,L,H,H_per_iteration,P,"
         "placement_error_1,placement_error_2";
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string record_csv_row(const task::TrialRecord& r, const std::string& trial_id,
                           std::string_view paradigm, std::string_view operator_name,
                           std::uint64_t seed) {
  std::ostringstream os;
  os << trial_id << ',' << paradigm << ',' << operator_name << ',' << seed << ','
     << (r.completed ? 1 : 0) << ',' << fmt(r.completion_time) << ',' << fmt(r.trajectory_length)
     << ',' << fmt(r.mean_assistance) << ',' << fmt(r.assistance_per_iteration) << ','
     << fmt(r.precision);
  for (std::size_t i = 0; i < 2; ++i) {
    os << ',';
    if (i < r.placement_errors.size()) os << fmt(r.placement_errors[i]);
  }
  return os.str();
}

json record_summary_json(const task::TrialRecord& r) {
  return {{"completed", r.completed},
          {"T", r.completion_time},
          {"L", r.trajectory_length},
          {"H", r.mean_assistance},
          {"H_per_iteration", r.assistance_per_iteration},
          {"P", r.precision},
          {"placement_errors", r.placement_errors}};
}

std::string trace_to_jsonl(const task::TrialRecord& r, const SimConfig& config,
                           std::uint64_t seed) {
  std::string out;
  json header = {{"type", "header"}, {"version", 1}, {"seed", seed}, {"config", to_json(config)}};
  out += header.dump();
  out += '\n';
  for (const auto& t : r.trace) {
    json row = {{"t", t.t},
                {"c", vec(t.c)},
                {"ee", vec(t.ee)},
                {"d", vec(t.d)},
                {"g", vec(t.g)},
                {"f", vec(t.f)},
                {"k", t.k},
                {"phase", t.phase},
                {"buttons", {{"inflate", t.inflate}, {"declare", t.declare}}}};
    if (!t.events.empty()) row["events"] = t.events;
    if (t.drop) row["drop"] = {{"item", t.drop->item_id}, {"x", t.drop->x}, {"y", t.drop->y}};
    out += row.dump();
    out += '\n';
  }
  json summary = record_summary_json(r);
  summary["type"] = "summary";
  out += summary.dump();
  out += '\n';
  return out;
}

LoadedTrace parse_trace_jsonl(const std::string& text) {
  LoadedTrace out;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  bool first_row = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw Error(ErrorCode::kParse, "trace line " + std::to_string(lineno) + " is not JSON");
    }
    try {
      const std::string type = j.value("type", "tick");
      if (type == "header") {
        if (j.value("version", 0) != 1) throw Error(ErrorCode::kParse, "unsupported trace version");
        out.config = config_from_json(j.at("config"));
        out.seed = j.at("seed").get<std::uint64_t>();
        header_seen = true;
      } else if (type == "summary") {
        out.summary = j;
      } else {
        if (!header_seen) throw Error(ErrorCode::kParse, "trace has no header line");
        // Row 0 is the initial state, not an input.
        if (first_row) {
          first_row = false;
          continue;
        }
        TickInput in_tick;
        in_tick.command = read_vec(j.at("c"));
        in_tick.buttons.inflate = j.at("buttons").at("inflate").get<bool>();
        in_tick.buttons.declare = j.at("buttons").at("declare").get<bool>();
        out.inputs.push_back(in_tick);
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, "trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!header_seen) throw Error(ErrorCode::kParse, "trace has no header line");
  return out;
}

LoadedTrace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open trace: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_trace_jsonl(ss.str());
}

void write_text_file(const std::string& path, const std::string& contents) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write: " + path);
  out << contents;
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

}  // namespace vine::harness
