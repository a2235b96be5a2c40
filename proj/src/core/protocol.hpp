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

#include "core/operators.hpp"
#include "core/types.hpp"

#include <nlohmann/json.hpp>

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace vine::server {

inline constexpr int kProtocolVersion = 1;

enum class CommandMode { kPosition, kVelocity };

struct ServerConfig {
  int port = 8080;
  double broadcast_hz = 30.0;
  CartesianPoint workspace_min{-0.35, -0.35, -0.75};
  CartesianPoint workspace_max{0.35, 0.35, -0.25};
  double velocity_scale = 0.15;  // m/s at full proxy deflection
  std::size_t frame_queue_capacity = 64;
  std::string ui_dir;            // static files served at /; empty = built-in page
};

/// Affine map between the unit proxy cube [-1, 1]^3 and the workspace box.
class WorkspaceMap {
 public:
  WorkspaceMap(const CartesianPoint& min, const CartesianPoint& max);
  CartesianPoint center() const { return (min_ + max_) / 2.0; }
  CartesianPoint to_workspace(const CartesianPoint& proxy) const;
  CartesianPoint clamp(const CartesianPoint& p) const;

 private:
  CartesianPoint min_, max_;
};

// Client -> server messages.
struct HelloMsg {
  int version = kProtocolVersion;
  std::string client;
};
struct CommandMsg {
  std::int64_t seq = 0;
  CartesianPoint proxy = CartesianPoint::Zero();
  CommandMode mode = CommandMode::kPosition;
  operators::Buttons buttons;
};
struct TrialStartMsg {
  std::string paradigm;   // token; empty = server default
  std::uint64_t seed = 0;
};
struct TrialStopMsg {};

using ClientMessage = std::variant<HelloMsg, CommandMsg, TrialStartMsg, TrialStopMsg>;

/// Server -> client error codes.
enum class ErrorKind { kMalformed, kUnsupportedVersion, kBadState };

struct ParseError {
  ErrorKind kind;
  std::string message;
};

/// Parses one client frame; a ParseError becomes an error frame.
std::variant<ClientMessage, ParseError> parse_client_message(const std::string& text);
nlohmann::json to_json(const ClientMessage& msg);

nlohmann::json error_frame(ErrorKind kind, const std::string& message);
std::string_view to_string(ErrorKind kind);

/// Latest-command-wins mailbox. A true button flag in a command is one press;
/// presses queue so none is lost between loop ticks.
class Mailbox {
 public:
  struct Snapshot {
    CartesianPoint proxy = CartesianPoint::Zero();
    CommandMode mode = CommandMode::kPosition;
    bool has_command = false;
    int inflate_edges = 0;
    int declare_edges = 0;
  };

  /// False when the sequence number is stale or duplicate.
  bool ingest(const CommandMsg& msg);
  /// Current command plus any button edges queued since the last take.
  Snapshot take();
  void reset();

 private:
  std::mutex mu_;
  std::int64_t last_seq_ = -1;
  Snapshot latest_;
};

/// Integrates the operator command c from mailbox contents at one loop tick.
CartesianPoint apply_command(const WorkspaceMap& map, const CartesianPoint& current,
                             const Mailbox::Snapshot& cmd, double velocity_scale, double dt);

/// Bounded FIFO of outgoing frames; when full, the oldest frame is dropped.
class FrameQueue {
 public:
  explicit FrameQueue(std::size_t capacity) : capacity_(capacity) {}
  void push(std::string frame);
  std::optional<std::string> try_pop();
  std::vector<std::string> drain();
  std::size_t dropped() const;
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::size_t capacity_;
  std::deque<std::string> frames_;
  std::size_t dropped_ = 0;
};

/// Decides which 100 Hz loop ticks emit a frame at the broadcast rate.
class BroadcastDecimator {
 public:
  BroadcastDecimator(double loop_hz, double broadcast_hz);
  bool should_emit(std::uint64_t tick);

 private:
  double ratio_;
  std::int64_t last_slot_ = -1;
};

}  // namespace vine::server
