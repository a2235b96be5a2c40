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

#include "core/plant.hpp"

#include "core/kinematics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace vine::plant {
namespace {

constexpr double kTimerTolerance = 1e-9;

double clamp_abs(double v, double limit) { return std::clamp(v, -limit, limit); }

}  // namespace

RobotState make_state(const MotorVector& motor) {
  RobotState s;
  s.motor = motor;
  s.tip = kinematics::forward_kinematics(motor);
  return s;
}

CartesianPoint World::item_grasp_point(std::size_t index) const {
  const auto& it = items.at(index);
  return {it.x, it.y, table_z + item_side};
}

CartesianPoint World::target_place_point(std::size_t index) const {
  const auto& t = targets.at(index);
  return {t.x, t.y, table_z + item_side};
}

World default_world() {
  World w;
  w.items = {{1, -0.15, 0.15}, {2, 0.15, -0.15}};
  w.targets = {{1, 0.15, 0.15}, {2, -0.15, -0.15}};
  return w;
}

World world_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("world: ") + e.what());
  }
  World w;
  auto read_list = [&](const char* key) {
    std::vector<Placement> out;
    if (!j.contains(key) || !j[key].is_array()) {
      throw Error(ErrorCode::kParse, std::string("world: missing array '") + key + "'");
    }
    for (const auto& e : j[key]) {
      try {
        out.push_back({e.at("id").get<int>(), e.at("x").get<double>(), e.at("y").get<double>()});
      } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::kParse, std::string("world: bad entry in '") + key + "': " + ex.what());
      }
    }
    return out;
  };
  w.items = read_list("items");
  w.targets = read_list("targets");
  if (w.items.empty() || w.items.size() != w.targets.size()) {
    throw Error(ErrorCode::kInvalidArgument, "world: need matching non-empty items and targets");
  }
  if (j.contains("base_height")) w.base_height = j["base_height"].get<double>();
  w.table_z = j.contains("table_z") ? j["table_z"].get<double>() : -w.base_height;
  if (j.contains("item_side")) w.item_side = j["item_side"].get<double>();
  if (!(w.table_z < 0.0) || !(w.item_side > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "world: table must lie below the base");
  }
  return w;
}

World load_world(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open world file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return world_from_json(ss.str());
}

std::string world_to_json(const World& world) {
  nlohmann::json j;
  auto list = [](const std::vector<Placement>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& p : v) a.push_back({{"id", p.id}, {"x", p.x}, {"y", p.y}});
    return a;
  };
  j["items"] = list(world.items);
  j["targets"] = list(world.targets);
  j["table_z"] = world.table_z;
  j["base_height"] = world.base_height;
  j["item_side"] = world.item_side;
  return j.dump();
}

std::vector<ItemState> initial_items(const World& world) {
  std::vector<ItemState> out;
  for (const auto& it : world.items) out.push_back({it.id, {it.x, it.y, world.table_z}, false});
  return out;
}

double support_height(const World& world, const GripperState& gripper) {
  return world.table_z + (gripper.held_item ? world.item_side : 0.0);
}

RobotState step_plant(const RobotState& state, const MotorVector& command, double dt,
                      const PlantConfig& config, std::optional<double> support_z) {
  const MotorVector& m = state.motor;
  const double steer_limit = config.steering_rate_limit * std::max(m.e, config.min_length);

  MotorVector rate;
  rate.s1 = clamp_abs(command.s1, steer_limit);
  rate.s2 = clamp_abs(command.s2, steer_limit);
  rate.s3 = clamp_abs(command.s3, steer_limit);
  rate.e = clamp_abs(command.e, config.eversion_rate_limit) +
           (config.pressurized ? config.passive_growth : 0.0);

  MotorVector next = m;
  next.s1 += rate.s1 * dt;
  next.s2 += rate.s2 * dt;
  next.s3 += rate.s3 * dt;
  next.e += rate.e * dt;

  const auto xy = kinematics::forward_steering(next);
  const double planar_sq = xy.x * xy.x + xy.y * xy.y;

  if (support_z) {
    // Contact: the tip may not sink further below the support than it already is.
    const double depth = -std::min(*support_z, state.tip.z());
    const double max_length = std::sqrt(planar_sq + depth * depth);
    if (next.e > max_length) next.e = std::max(max_length, m.e - config.eversion_rate_limit * dt);
  }
  next.e = std::max({next.e, config.min_length, std::sqrt(planar_sq)});
  rate.e = (next.e - m.e) / dt;

  RobotState out = state;
  out.motor = next;
  out.motor_rate = rate;
  out.tip = kinematics::forward_kinematics(next);
  out.tip_velocity = (out.tip - state.tip) / dt;
  return out;
}

std::optional<GripperEvent> step_gripper(RobotState& state, std::vector<ItemState>& items,
                                         const World& world, bool inflate_pressed, double dt,
                                         const PlantConfig& config) {
  GripperState& g = state.gripper;
  auto find = [&](int id) -> ItemState& {
    return *std::find_if(items.begin(), items.end(), [id](const ItemState& i) { return i.id == id; });
  };
  const CartesianPoint hang(0.0, 0.0, world.item_side);

  if (g.held_item && g.release_timer > 0.0) {
    g.release_timer -= dt;
    ItemState& item = find(*g.held_item);
    if (g.release_timer <= kTimerTolerance) {
      const int id = *g.held_item;
      item.pose = {state.tip.x(), state.tip.y(), world.table_z};
      item.placed = true;
      g = GripperState{};
      return GripperEvent{GripperEvent::Kind::kDropped, id};
    }
    item.pose = state.tip - hang;
    return std::nullopt;
  }

  if (g.held_item) {
    find(*g.held_item).pose = state.tip - hang;
    if (inflate_pressed) {
      g.inflated = true;
      g.release_timer = config.release_time;
      return GripperEvent{GripperEvent::Kind::kReleaseStarted, *g.held_item};
    }
    return std::nullopt;
  }

  if (g.inflated) return std::nullopt;

  // Below the top face only the planar offset matters: the tip is beside or
  // pressed onto the cube.
  const ItemState* best = nullptr;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& item : items) {
    if (item.placed) continue;
    const CartesianPoint top = item.pose + hang;
    const double dz = std::max(0.0, state.tip.z() - top.z());
    const double dist = std::hypot(state.tip.x() - top.x(), state.tip.y() - top.y(), dz);
    if (dist < config.capture_radius &&
        (dist < best_dist || (dist == best_dist && best && item.id < best->id))) {
      best = &item;
      best_dist = dist;
    }
  }
  if (!best) return std::nullopt;
  g.held_item = best->id;
  find(best->id).pose = state.tip - hang;
  return GripperEvent{GripperEvent::Kind::kCaptured, best->id};
}

}  // namespace vine::plant
