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
#include "core/protocol.hpp"
#include "core/trial.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace vine::server {

/// Immutable view of an active trial, built once per broadcast.
struct StateSnapshot {
  double t = 0.0;
  CartesianPoint ee = CartesianPoint::Zero();
  CartesianPoint c = CartesianPoint::Zero();
  CartesianPoint d = CartesianPoint::Zero();
  CartesianPoint g = CartesianPoint::Zero();
  paradigms::GuidanceForce f;
  double k = 0.0;
  std::string phase;
  plant::GripperState gripper;
  std::vector<plant::ItemState> items;
  const plant::World* world = nullptr;
  double trajectory_length = 0.0;
  double mean_assistance = 0.0;
};

nlohmann::json state_frame(const StateSnapshot& s);
nlohmann::json heartbeat_frame(const std::string& session_id, std::uint64_t tick, bool active);

/// One teleoperation session. Network contexts call `receive`, which only
/// touches the mailbox, a control queue and the outbox; `tick` runs on the
/// loop context and is the only mutator of the trial.
class Session {
 public:
  explicit Session(SimConfig config, std::string id = "s1");

  /// Handles one client text frame. Errors and the hello reply go to the outbox.
  void receive(const std::string& text);
  /// One fixed-dt loop iteration.
  void tick();
  /// Ends any active trial, e.g. on client disconnect.
  void abort_trial(const std::string& reason);

  FrameQueue& outbox() { return outbox_; }
  bool active() const { return active_.load(); }
  const std::string& id() const { return id_; }
  std::uint64_t ticks() const { return tick_; }
  const SimConfig& config() const { return config_; }

  /// Record of the most recently finished trial.
  std::optional<task::TrialRecord> last_record() const;
  /// JSONL trace of the most recently finished trial.
  std::optional<std::string> last_trace() const;
  /// Called with (record, trace JSONL) whenever a trial ends.
  void on_trial_end(std::function<void(const task::TrialRecord&, const std::string&)> cb) {
    trial_end_cb_ = std::move(cb);
  }

 private:
  struct Control {
    enum class Kind { kStart, kStop } kind;
    TrialStartMsg start;
    std::string reason;
  };

  void push(const nlohmann::json& frame);
  void start_trial(const TrialStartMsg& msg);
  void finish_trial(const std::string& reason);

  SimConfig config_;
  std::string id_;
  WorkspaceMap map_;
  Mailbox mailbox_;
  FrameQueue outbox_;
  BroadcastDecimator decimator_;
  std::mutex control_mu_;
  std::vector<Control> controls_;

  // Loop-context state.
  std::uint64_t tick_ = 0;
  std::atomic<bool> active_{false};
  std::unique_ptr<harness::TrialLoop> trial_;
  std::uint64_t trial_seed_ = 0;
  CartesianPoint command_ = CartesianPoint::Zero();
  int pending_inflate_ = 0;
  int pending_declare_ = 0;
  double path_length_ = 0.0;
  double force_integral_ = 0.0;

  mutable std::mutex record_mu_;
  std::optional<task::TrialRecord> last_record_;
  std::optional<std::string> last_trace_;
  std::function<void(const task::TrialRecord&, const std::string&)> trial_end_cb_;
};

/// WebSocket + HTTP front end: /ws for the protocol, /healthz, and the static
/// UI at /. One operator connection at a time.
class Server {
 public:
  explicit Server(SimConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and starts the network and loop threads; returns immediately.
  void start();
  /// Blocks until stop() is called.
  void wait();
  /// Thread-safe and idempotent; safe to call while another thread waits.
  void stop();

  /// Bound port (useful when configured with port 0).
  int port() const { return port_.load(); }
  Session& session() { return *session_; }

  /// Directory where finished trial traces are written; empty disables.
  void set_output_dir(std::string dir) { out_dir_ = std::move(dir); }

 private:
  struct Impl;
  SimConfig config_;
  std::unique_ptr<Session> session_;
  std::unique_ptr<Impl> impl_;
  std::atomic<int> port_{0};
  std::string out_dir_;
  std::thread io_thread_;
  std::thread loop_thread_;
  std::atomic<bool> running_{false};
};

}  // namespace vine::server
