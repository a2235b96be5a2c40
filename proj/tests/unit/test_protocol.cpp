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

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace vine;
using namespace vine::server;
using nlohmann::json;

namespace {

WorkspaceMap default_map() {
  const ServerConfig c;
  return WorkspaceMap(c.workspace_min, c.workspace_max);
}

ClientMessage parsed(const std::string& text) {
  auto r = parse_client_message(text);
  REQUIRE(std::holds_alternative<ClientMessage>(r));
  return std::get<ClientMessage>(r);
}

ErrorKind error_of(const std::string& text) {
  auto r = parse_client_message(text);
  REQUIRE(std::holds_alternative<ParseError>(r));
  return std::get<ParseError>(r).kind;
}

CommandMsg cmd(std::int64_t seq, CartesianPoint proxy = CartesianPoint::Zero(),
               CommandMode mode = CommandMode::kPosition) {
  CommandMsg m;
  m.seq = seq;
  m.proxy = proxy;
  m.mode = mode;
  return m;
}

}  // namespace

TEST_CASE("proxy origin maps to the workspace center", "[protocol]") {
  const auto map = default_map();
  CHECK(map.to_workspace(CartesianPoint::Zero()).isApprox(CartesianPoint(0, 0, -0.5)));
  CHECK(map.to_workspace({1, -1, 1}).isApprox(CartesianPoint(0.35, -0.35, -0.25)));
  // Proxies beyond the unit cube saturate at the box.
  CHECK(map.to_workspace({4, 0, -9}).isApprox(CartesianPoint(0.35, 0, -0.75)));
  CHECK_THROWS_AS(WorkspaceMap({0, 0, 0}, {1, 0, 1}), Error);
}

TEST_CASE("position and velocity commands", "[protocol]") {
  const auto map = default_map();
  const CartesianPoint current{0.1, 0.1, -0.6};
  Mailbox::Snapshot s;
  CHECK(apply_command(map, current, s, 0.15, 0.01) == current);  // nothing received yet

  s.has_command = true;
  s.proxy = {0.5, 0, 0};
  CHECK(apply_command(map, current, s, 0.15, 0.01).isApprox(CartesianPoint(0.175, 0, -0.5)));

  s.mode = CommandMode::kVelocity;
  s.proxy = CartesianPoint::Zero();
  CHECK(apply_command(map, current, s, 0.15, 0.01) == current);

  s.proxy = {1, 0, -0.5};
  CHECK(apply_command(map, current, s, 0.15, 0.01)
            .isApprox(CartesianPoint(0.1015, 0.1, -0.60075)));

  // Integration stops at the box edge.
  CartesianPoint c = current;
  for (int i = 0; i < 1000; ++i) c = apply_command(map, c, s, 0.15, 0.01);
  CHECK(c.x() == 0.35);
  CHECK(c.z() == -0.75);
}

TEST_CASE("mailbox keeps the latest command and drops stale ones", "[protocol]") {
  Mailbox box;
  CHECK_FALSE(box.take().has_command);
  CHECK(box.ingest(cmd(3, {0.1, 0, 0})));
  CHECK_FALSE(box.ingest(cmd(3, {0.9, 0, 0})));  // duplicate
  CHECK_FALSE(box.ingest(cmd(2, {0.8, 0, 0})));  // stale
  CHECK(box.ingest(cmd(7, {0.2, 0, 0})));
  const auto s = box.take();
  CHECK(s.has_command);
  CHECK(s.proxy.x() == 0.2);

  box.reset();
  CHECK(box.ingest(cmd(0)));
}

TEST_CASE("button presses are queued exactly once", "[protocol]") {
  Mailbox box;
  auto press = cmd(1);
  press.buttons.declare = true;
  CHECK(box.ingest(press));
  CHECK_FALSE(box.ingest(press));  // a resent frame is not a second press
  press.seq = 2;
  press.buttons.inflate = true;
  CHECK(box.ingest(press));
  box.ingest(cmd(3));  // the latest command has no buttons, earlier presses survive

  auto s = box.take();
  CHECK(s.declare_edges == 2);
  CHECK(s.inflate_edges == 1);
  s = box.take();
  CHECK(s.declare_edges == 0);
  CHECK(s.inflate_edges == 0);
  CHECK(s.has_command);
}

TEST_CASE("message parsing", "[protocol]") {
  auto hello = std::get<HelloMsg>(parsed(R"({"type":"hello","version":1,"client":"ui"})"));
  CHECK(hello.client == "ui");

  auto c = std::get<CommandMsg>(parsed(
      R"({"type":"cmd","seq":12,"proxy":[0.1,-0.2,0.3],"mode":"velocity","buttons":{"inflate":true}})"));
  CHECK(c.seq == 12);
  CHECK(c.proxy == CartesianPoint(0.1, -0.2, 0.3));
  CHECK(c.mode == CommandMode::kVelocity);
  CHECK(c.buttons.inflate);
  CHECK_FALSE(c.buttons.declare);

  auto bare = std::get<CommandMsg>(parsed(R"({"type":"cmd","seq":1,"proxy":[0,0,0]})"));
  CHECK(bare.mode == CommandMode::kPosition);

  auto start = std::get<TrialStartMsg>(parsed(R"({"type":"trial_start","paradigm":"aan","seed":9})"));
  CHECK(start.paradigm == "aan");
  CHECK(start.seed == 9);
  CHECK(std::holds_alternative<TrialStopMsg>(parsed(R"({"type":"trial_stop"})")));
}

TEST_CASE("malformed frames are classified", "[protocol]") {
  CHECK(error_of("not json") == ErrorKind::kMalformed);
  CHECK(error_of("[1,2]") == ErrorKind::kMalformed);
  CHECK(error_of(R"({"seq":1})") == ErrorKind::kMalformed);
  CHECK(error_of(R"({"type":"warp"})") == ErrorKind::kMalformed);
  CHECK(error_of(R"({"type":"hello"})") == ErrorKind::kMalformed);
  CHECK(error_of(R"({"type":"hello","version":2})") == ErrorKind::kUnsupportedVersion);
  CHECK(error_of(R"({"type":"cmd","proxy":[0,0,0]})") == ErrorKind::kMalformed);
  CHECK(error_of(R"({"type":"cmd","seq":1,"proxy":[0,0]})") == ErrorKind::kMalformed);
  CHECK(error_of(R"({"type":"cmd","seq":1,"proxy":[0,"a",0]})") == ErrorKind::kMalformed);
  CHECK(error_of(R"({"type":"cmd","seq":1,"proxy":[0,0,0],"mode":"torque"})") ==
        ErrorKind::kMalformed);
  CHECK(error_of(R"({"type":"cmd","seq":1,"proxy":[0,0,0],"buttons":true})") ==
        ErrorKind::kMalformed);

  const json e = error_frame(ErrorKind::kBadState, "no trial");
  CHECK(e["type"] == "error");
  CHECK(e["code"] == "bad_state");
  CHECK(e["msg"] == "no trial");
  CHECK(to_string(ErrorKind::kUnsupportedVersion) == "unsupported_version");
}

TEST_CASE("every message type round trips through JSON", "[protocol][property]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::uniform_int_distribution<std::int64_t> seq(0, 1LL << 50);
  for (int i = 0; i < 500; ++i) {
    std::vector<ClientMessage> msgs;
    HelloMsg h;
    h.client = "client-" + std::to_string(i);
    msgs.emplace_back(h);
    CommandMsg c = cmd(seq(rng), {u(rng), u(rng), u(rng)},
                       i % 2 ? CommandMode::kVelocity : CommandMode::kPosition);
    c.buttons.inflate = i % 3 == 0;
    c.buttons.declare = i % 5 == 0;
    msgs.emplace_back(c);
    msgs.emplace_back(TrialStartMsg{i % 2 ? "fixed" : "", rng()});
    msgs.emplace_back(TrialStopMsg{});
    for (const auto& m : msgs) {
      const json j = to_json(m);
      const auto back = parsed(j.dump());
      REQUIRE(back.index() == m.index());
      REQUIRE(to_json(back) == j);
    }
  }
}

TEST_CASE("frame queue is bounded and drops the oldest", "[protocol]") {
  FrameQueue q(3);
  for (int i = 0; i < 5; ++i) q.push(std::to_string(i));
  CHECK(q.size() == 3);
  CHECK(q.dropped() == 2);
  CHECK(q.try_pop() == "2");
  const auto rest = q.drain();
  CHECK(rest == std::vector<std::string>{"3", "4"});
  CHECK_FALSE(q.try_pop());
}

TEST_CASE("broadcast decimation hits the configured rate", "[protocol]") {
  auto emitted = [](double hz) {
    BroadcastDecimator d(100.0, hz);
    int n = 0;
    for (std::uint64_t t = 0; t < 1000; ++t) n += d.should_emit(t);
    return n;
  };
  CHECK(emitted(30.0) == 300);
  CHECK(emitted(100.0) == 1000);
  CHECK(emitted(500.0) == 1000);
  CHECK(emitted(10.0) == 100);
}
