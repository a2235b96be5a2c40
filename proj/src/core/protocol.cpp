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

#include "core/protocol.hpp"

#include <algorithm>
#include <cmath>

namespace vine::server {

using nlohmann::json;

WorkspaceMap::WorkspaceMap(const CartesianPoint& min, const CartesianPoint& max)
    : min_(min), max_(max) {
  if (!((max_ - min_).array() > 0.0).all()) {
    throw Error(ErrorCode::kInvalidArgument, "workspace box must have positive extent");
  }
}

CartesianPoint WorkspaceMap::to_workspace(const CartesianPoint& proxy) const {
  const CartesianPoint unit = proxy.cwiseMax(-1.0).cwiseMin(1.0);
  const CartesianPoint half = (max_ - min_) / 2.0;
  return center() + unit.cwiseProduct(half);
}

CartesianPoint WorkspaceMap::clamp(const CartesianPoint& p) const {
  return p.cwiseMax(min_).cwiseMin(max_);
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMalformed: return "malformed";
    case ErrorKind::kUnsupportedVersion: return "unsupported_version";
    case ErrorKind::kBadState: return "bad_state";
  }
  return "malformed";
}

json error_frame(ErrorKind kind, const std::string& message) {
  return {{"type", "error"}, {"code", to_string(kind)}, {"msg", message}};
}

namespace {

ParseError malformed(const std::string& why) { return {ErrorKind::kMalformed, why}; }

std::optional<CartesianPoint> read_vec3(const json& j) {
  if (!j.is_array() || j.size() != 3) return std::nullopt;
  CartesianPoint p;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number()) return std::nullopt;
    p[i] = j[i].get<double>();
  }
  if (!p.allFinite()) return std::nullopt;
  return p;
}

}  // namespace

std::variant<ClientMessage, ParseError> parse_client_message(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return malformed("frame is not a JSON object");
  if (!j.contains("type") || !j["type"].is_string()) return malformed("missing 'type'");
  const std::string type = j["type"];

  if (type == "hello") {
    HelloMsg m;
    if (!j.contains("version") || !j["version"].is_number_integer()) {
      return malformed("hello needs an integer 'version'");
    }
    m.version = j["version"].get<int>();
    if (m.version != kProtocolVersion) {
      return ParseError{ErrorKind::kUnsupportedVersion,
                        "server speaks version " + std::to_string(kProtocolVersion)};
    }
    if (j.contains("client") && j["client"].is_string()) m.client = j["client"];
    return ClientMessage{m};
  }
  if (type == "cmd") {
    CommandMsg m;
    if (!j.contains("seq") || !j["seq"].is_number_integer()) return malformed("cmd needs 'seq'");
    m.seq = j["seq"].get<std::int64_t>();
    if (!j.contains("proxy")) return malformed("cmd needs 'proxy'");
    auto proxy = read_vec3(j["proxy"]);
    if (!proxy) return malformed("'proxy' must be three finite numbers");
    m.proxy = *proxy;
    const std::string mode = j.value("mode", "position");
    if (mode == "position") {
      m.mode = CommandMode::kPosition;
    } else if (mode == "velocity") {
      m.mode = CommandMode::kVelocity;
    } else {
      return malformed("unknown mode '" + mode + "'");
    }
    if (j.contains("buttons")) {
      const auto& b = j["buttons"];
      if (!b.is_object()) return malformed("'buttons' must be an object");
      m.buttons.inflate = b.value("inflate", false);
      m.buttons.declare = b.value("declare", false);
    }
    return ClientMessage{m};
  }
  if (type == "trial_start") {
    TrialStartMsg m;
    if (j.contains("paradigm") && j["paradigm"].is_string()) m.paradigm = j["paradigm"];
    if (j.contains("seed") && j["seed"].is_number_unsigned()) m.seed = j["seed"].get<std::uint64_t>();
    return ClientMessage{m};
  }
  if (type == "trial_stop") return ClientMessage{TrialStopMsg{}};
  return malformed("unknown message type '" + type + "'");
}

json to_json(const ClientMessage& msg) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, HelloMsg>) {
          return {{"type", "hello"}, {"version", m.version}, {"client", m.client}};
        } else if constexpr (std::is_same_v<T, CommandMsg>) {
          return {{"type", "cmd"},
                  {"seq", m.seq},
                  {"proxy", {m.proxy.x(), m.proxy.y(), m.proxy.z()}},
                  {"mode", m.mode == CommandMode::kPosition ? "position" : "velocity"},
                  {"buttons", {{"inflate", m.buttons.inflate}, {"declare", m.buttons.declare}}}};
        } else if constexpr (std::is_same_v<T, TrialStartMsg>) {
          return {{"type", "trial_start"}, {"paradigm", m.paradigm}, {"seed", m.seed}};
        } else {
          return {{"type", "trial_stop"}};
        }
      },
      msg);
}

bool Mailbox::ingest(const CommandMsg& msg) {
  std::lock_guard lock(mu_);
  if (msg.seq <= last_seq_) return false;
  last_seq_ = msg.seq;
  latest_.proxy = msg.proxy;
  latest_.mode = msg.mode;
  latest_.has_command = true;
  if (msg.buttons.inflate) ++latest_.inflate_edges;
  if (msg.buttons.declare) ++latest_.declare_edges;
  return true;
}

Mailbox::Snapshot Mailbox::take() {
  std::lock_guard lock(mu_);
  Snapshot out = latest_;
  latest_.inflate_edges = 0;
  latest_.declare_edges = 0;
  return out;
}

void Mailbox::reset() {
  std::lock_guard lock(mu_);
  last_seq_ = -1;
  latest_ = Snapshot{};
}

CartesianPoint apply_command(const WorkspaceMap& map, const CartesianPoint& current,
                             const Mailbox::Snapshot& cmd, double velocity_scale, double dt) {
  if (!cmd.has_command) return current;
  if (cmd.mode == CommandMode::kPosition) return map.to_workspace(cmd.proxy);
  const CartesianPoint unit = cmd.proxy.cwiseMax(-1.0).cwiseMin(1.0);
  return map.clamp(current + unit * velocity_scale * dt);
}

void FrameQueue::push(std::string frame) {
  std::lock_guard lock(mu_);
  frames_.push_back(std::move(frame));
  while (frames_.size() > capacity_) {
    frames_.pop_front();
    ++dropped_;
  }
}

std::optional<std::string> FrameQueue::try_pop() {
  std::lock_guard lock(mu_);
  if (frames_.empty()) return std::nullopt;
  std::string f = std::move(frames_.front());
  frames_.pop_front();
  return f;
}

std::vector<std::string> FrameQueue::drain() {
  std::lock_guard lock(mu_);
  std::vector<std::string> out(std::make_move_iterator(frames_.begin()),
                               std::make_move_iterator(frames_.end()));
  frames_.clear();
  return out;
}

std::size_t FrameQueue::dropped() const {
  std::lock_guard lock(mu_);
  return dropped_;
}

std::size_t FrameQueue::size() const {
  std::lock_guard lock(mu_);
  return frames_.size();
}

BroadcastDecimator::BroadcastDecimator(double loop_hz, double broadcast_hz)
    : ratio_(std::clamp(broadcast_hz, 0.1, loop_hz) / loop_hz) {}

bool BroadcastDecimator::should_emit(std::uint64_t tick) {
  const auto slot = static_cast<std::int64_t>(std::floor(static_cast<double>(tick) * ratio_));
  if (slot == last_slot_) return false;
  last_slot_ = slot;
  return true;
}

}  // namespace vine::server
