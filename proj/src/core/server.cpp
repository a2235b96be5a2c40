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

#include "core/server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace vine::server {

using nlohmann::json;

namespace {

json vec(const CartesianPoint& p) { return json::array({p.x(), p.y(), p.z()}); }

json world_json(const plant::World& w) {
  json items = json::array();
  for (std::size_t i = 0; i < w.items.size(); ++i) {
    items.push_back({{"id", w.items[i].id}, {"grasp", vec(w.item_grasp_point(i))}});
  }
  json targets = json::array();
  for (std::size_t i = 0; i < w.targets.size(); ++i) {
    targets.push_back({{"id", w.targets[i].id},
                       {"pose", vec({w.targets[i].x, w.targets[i].y, w.table_z})},
                       {"place", vec(w.target_place_point(i))}});
  }
  return {{"items", items},
          {"targets", targets},
          {"table_z", w.table_z},
          {"item_side", w.item_side},
          {"base_height", w.base_height}};
}

}  // namespace

json state_frame(const StateSnapshot& s) {
  json items = json::array();
  for (const auto& it : s.items) {
    items.push_back({{"id", it.id}, {"pose", vec(it.pose)}, {"placed", it.placed}});
  }
  json targets = json::array();
  if (s.world) {
    for (const auto& t : s.world->targets) {
      targets.push_back({{"id", t.id}, {"pose", vec({t.x, t.y, s.world->table_z})}});
    }
  }
  json holding = s.gripper.held_item ? json(*s.gripper.held_item) : json(nullptr);
  return {{"type", "state"},
          {"t", s.t},
          {"ee", vec(s.ee)},
          {"c", vec(s.c)},
          {"d", vec(s.d)},
          {"g", vec(s.g)},
          {"f", vec(s.f.vec)},
          {"f_norm", s.f.magnitude},
          {"k", s.k},
          {"phase", s.phase},
          {"gripper",
           {{"inflated", s.gripper.inflated},
            {"holding", holding},
            {"releasing", s.gripper.release_timer > 0.0}}},
          {"items", items},
          {"targets", targets},
          {"metrics", {{"T", s.t}, {"L", s.trajectory_length}, {"H", s.mean_assistance}}}};
}

json heartbeat_frame(const std::string& session_id, std::uint64_t tick, bool active) {
  return {{"type", "heartbeat"}, {"session", session_id}, {"tick", tick}, {"active", active}};
}

// --- Session -------------------------------------------------------------

Session::Session(SimConfig config, std::string id)
    : config_(std::move(config)),
      id_(std::move(id)),
      map_(config_.server.workspace_min, config_.server.workspace_max),
      outbox_(config_.server.frame_queue_capacity),
      decimator_(config_.harness.refresh_hz, config_.server.broadcast_hz) {
  config_.validate();
}

void Session::push(const json& frame) { outbox_.push(frame.dump()); }

void Session::receive(const std::string& text) {
  auto parsed = parse_client_message(text);
  if (auto* err = std::get_if<ParseError>(&parsed)) {
    push(error_frame(err->kind, err->message));
    return;
  }
  const auto& msg = std::get<ClientMessage>(parsed);
  if (std::holds_alternative<HelloMsg>(msg)) {
    std::vector<std::string> kinds;
    for (auto k : {paradigms::ParadigmKind::kFullTeleoperation,
                   paradigms::ParadigmKind::kAssistAsNeeded,
                   paradigms::ParadigmKind::kFixedAssistance,
                   paradigms::ParadigmKind::kManualSteeringAutonomousEversion,
                   paradigms::ParadigmKind::kAutonomousSteeringManualEversion,
                   paradigms::ParadigmKind::kMostlyAutonomous}) {
      kinds.emplace_back(paradigms::to_token(k));
    }
    push({{"type", "hello"},
          {"version", kProtocolVersion},
          {"server", "vinesim"},
          {"session", id_},
          {"paradigm", paradigms::to_token(config_.paradigm.kind)},
          {"paradigms", kinds},
          {"f_max", config_.paradigm.f_max},
          {"broadcast_hz", config_.server.broadcast_hz},
          {"workspace",
           {{"min", vec(config_.server.workspace_min)},
            {"max", vec(config_.server.workspace_max)}}},
          {"world", world_json(config_.world)}});
  } else if (const auto* cmd = std::get_if<CommandMsg>(&msg)) {
    mailbox_.ingest(*cmd);  // stale or duplicate sequence numbers are dropped silently
  } else if (const auto* start = std::get_if<TrialStartMsg>(&msg)) {
    std::lock_guard lock(control_mu_);
    controls_.push_back({Control::Kind::kStart, *start, {}});
  } else {
    std::lock_guard lock(control_mu_);
    controls_.push_back({Control::Kind::kStop, {}, "stopped"});
  }
}

void Session::abort_trial(const std::string& reason) {
  std::lock_guard lock(control_mu_);
  controls_.push_back({Control::Kind::kStop, {}, reason});
}

void Session::start_trial(const TrialStartMsg& msg) {
  if (trial_) {
    push(error_frame(ErrorKind::kBadState, "a trial is already active"));
    return;
  }
  SimConfig cfg = config_;
  if (!msg.paradigm.empty()) {
    auto kind = paradigms::parse_kind(msg.paradigm);
    if (!kind) {
      push(error_frame(ErrorKind::kMalformed, "unknown paradigm '" + msg.paradigm + "'"));
      return;
    }
    cfg.paradigm.kind = *kind;
  }
  cfg.harness.operator_source = OperatorSource::kNone;
  trial_seed_ = msg.seed != 0 ? msg.seed : config_.harness.seed;
  trial_ = std::make_unique<harness::TrialLoop>(cfg, trial_seed_);
  command_ = trial_->command();
  pending_inflate_ = 0;
  pending_declare_ = 0;
  path_length_ = 0.0;
  force_integral_ = 0.0;
  decimator_ = BroadcastDecimator(config_.harness.refresh_hz, config_.server.broadcast_hz);
  mailbox_.reset();
  active_ = true;
  push({{"type", "trial_start"},
        {"session", id_},
        {"paradigm", paradigms::to_token(cfg.paradigm.kind)},
        {"seed", trial_seed_},
        {"world", world_json(cfg.world)}});
}

void Session::finish_trial(const std::string& reason) {
  task::TrialRecord record = trial_->record();
  std::string trace = harness::trace_to_jsonl(record, trial_->config(), trial_seed_);
  push({{"type", "trial_end"},
        {"session", id_},
        {"reason", reason},
        {"record", harness::record_summary_json(record)}});
  trial_.reset();
  active_ = false;
  if (trial_end_cb_) trial_end_cb_(record, trace);
  std::lock_guard lock(record_mu_);
  last_record_ = std::move(record);
  last_trace_ = std::move(trace);
}

void Session::tick() {
  std::vector<Control> controls;
  {
    std::lock_guard lock(control_mu_);
    controls.swap(controls_);
  }
  for (const auto& c : controls) {
    if (c.kind == Control::Kind::kStart) {
      start_trial(c.start);
    } else if (trial_) {
      finish_trial(c.reason);
    } else if (c.reason == "stopped") {
      push(error_frame(ErrorKind::kBadState, "no active trial"));
    }
  }

  const double dt = config_.harness.dt();
  const auto snap = mailbox_.take();
  if (!trial_) {
    const auto period = static_cast<std::uint64_t>(std::max(1.0, config_.harness.refresh_hz));
    if (tick_ % period == 0) push(heartbeat_frame(id_, tick_, false));
    ++tick_;
    return;
  }

  pending_inflate_ += snap.inflate_edges;
  pending_declare_ += snap.declare_edges;
  command_ = apply_command(map_, command_, snap, config_.server.velocity_scale, dt);
  harness::TickInput in;
  in.command = command_;
  // One press per tick; extra presses wait for the following ticks.
  in.buttons.inflate = pending_inflate_ > 0;
  in.buttons.declare = pending_declare_ > 0;
  if (in.buttons.inflate) --pending_inflate_;
  if (in.buttons.declare) --pending_declare_;

  const CartesianPoint before = trial_->robot().tip;
  const auto& row = trial_->step(in);
  path_length_ += (row.ee - before).norm();
  force_integral_ += row.f.norm() * dt;

  const bool finished = trial_->finished();
  if (decimator_.should_emit(trial_->ticks()) || finished) {
    StateSnapshot s;
    s.t = row.t;
    s.ee = row.ee;
    s.c = row.c;
    s.d = row.d;
    s.g = row.g;
    s.f = trial_->force();
    s.k = row.k;
    s.phase = row.phase;
    s.gripper = trial_->robot().gripper;
    s.items = trial_->items();
    s.world = &trial_->config().world;
    s.trajectory_length = path_length_;
    s.mean_assistance = row.t > 0.0 ? force_integral_ / row.t : 0.0;
    push(state_frame(s));
  }
  if (finished) finish_trial(trial_->done() ? "completed" : "timeout");
  ++tick_;
}

std::optional<task::TrialRecord> Session::last_record() const {
  std::lock_guard lock(record_mu_);
  return last_record_;
}

std::optional<std::string> Session::last_trace() const {
  std::lock_guard lock(record_mu_);
  return last_trace_;
}

// --- transport -----------------------------------------------------------

namespace net = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

namespace {

constexpr const char* kBuiltinPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>vinesim</title></head>
<body>
<p>vinesim server. No UI directory configured; the latest frame is shown below.</p>
<pre id="out">connecting...</pre>
<script>
const ws = new WebSocket(`ws://${location.host}/ws`);
ws.onopen = () => ws.send(JSON.stringify({type: "hello", version: 1, client: "builtin"}));
ws.onmessage = (ev) => { document.getElementById("out").textContent = ev.data; };
ws.onclose = () => { document.getElementById("out").textContent = "disconnected"; };
</script>
</body></html>
)";

std::string_view mime_type(const std::string& path) {
  const auto ext = std::filesystem::path(path).extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html";
  if (ext == ".js" || ext == ".mjs") return "application/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  return "application/octet-stream";
}

std::optional<std::string> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

struct Server::Impl {
  explicit Impl(Session& s, std::string ui) : session(s), ui_dir(std::move(ui)) {}

  class WsConn;
  class HttpConn;

  net::io_context ioc{1};
  std::optional<tcp::acceptor> acceptor;
  Session& session;
  std::string ui_dir;
  std::weak_ptr<WsConn> client;  // io thread only

  void accept();
  void notify();
  http::response<http::string_body> respond(const http::request<http::string_body>& req);
};

class Server::Impl::WsConn : public std::enable_shared_from_this<WsConn> {
 public:
  WsConn(Impl& impl, tcp::socket socket) : impl_(impl), ws_(std::move(socket)) {}

  void run(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
      if (!ec) self->on_accept();
    });
  }

  void flush() {
    if (writing_ || closing_) return;
    auto frame = impl_.session.outbox().try_pop();
    if (!frame) return;
    current_ = std::move(*frame);
    writing_ = true;
    ws_.text(true);
    ws_.async_write(net::buffer(current_),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      self->writing_ = false;
                      if (ec) return self->on_close();
                      self->flush();
                    });
  }

 private:
  void on_accept() {
    if (auto other = impl_.client.lock()) {
      // One operator per session; refuse the newcomer.
      closing_ = true;
      current_ = error_frame(ErrorKind::kBadState, "session already has a client").dump();
      ws_.async_write(net::buffer(current_),
                      [self = shared_from_this()](beast::error_code, std::size_t) {
                        self->ws_.async_close(websocket::close_code::try_again_later,
                                              [self](beast::error_code) {});
                      });
      return;
    }
    impl_.client = weak_from_this();
    impl_.session.outbox().drain();  // frames queued while nobody listened
    owner_ = true;
    read();
  }

  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->on_close();
      self->impl_.session.receive(beast::buffers_to_string(self->buffer_.data()));
      self->buffer_.consume(self->buffer_.size());
      self->flush();
      self->read();
    });
  }

  void on_close() {
    if (!owner_) return;
    owner_ = false;
    impl_.client.reset();
    impl_.session.abort_trial("client disconnected");
  }

  Impl& impl_;
  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::string current_;
  bool writing_ = false;
  bool closing_ = false;
  bool owner_ = false;
};

class Server::Impl::HttpConn : public std::enable_shared_from_this<HttpConn> {
 public:
  HttpConn(Impl& impl, tcp::socket socket) : impl_(impl), stream_(std::move(socket)) {}

  void run() {
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) {
                       if (ec) return;
                       self->on_request();
                     });
  }

 private:
  void on_request() {
    if (websocket::is_upgrade(req_)) {
      if (req_.target() == "/ws") {
        stream_.expires_never();
        std::make_shared<WsConn>(impl_, stream_.release_socket())->run(std::move(req_));
        return;
      }
    }
    auto res = std::make_shared<http::response<http::string_body>>(impl_.respond(req_));
    http::async_write(stream_, *res,
                      [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
                        if (ec || res->need_eof()) {
                          beast::error_code ignored;
                          self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
                          return;
                        }
                        self->req_ = {};
                        self->run();
                      });
  }

  Impl& impl_;
  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
};

void Server::Impl::accept() {
  acceptor->async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket s) {
    if (ec == net::error::operation_aborted) return;
    if (!ec) std::make_shared<HttpConn>(*this, std::move(s))->run();
    accept();
  });
}

void Server::Impl::notify() {
  net::post(ioc, [this] {
    if (auto c = client.lock()) c->flush();
  });
}

http::response<http::string_body> Server::Impl::respond(
    const http::request<http::string_body>& req) {
  http::response<http::string_body> res;
  res.version(req.version());
  res.keep_alive(req.keep_alive());
  res.set(http::field::server, "vinesim");
  auto reply = [&](http::status status, std::string_view type, std::string body) {
    res.result(status);
    res.set(http::field::content_type, std::string(type));
    res.body() = std::move(body);
    res.prepare_payload();
    return res;
  };
  if (req.method() != http::verb::get && req.method() != http::verb::head) {
    return reply(http::status::method_not_allowed, "text/plain", "method not allowed\n");
  }
  std::string target(req.target());
  if (auto q = target.find('?'); q != std::string::npos) target.resize(q);

  if (target == "/healthz") {
    json body = {{"status", "ok"},
                 {"session", session.id()},
                 {"active", session.active()},
                 {"protocol", kProtocolVersion}};
    return reply(http::status::ok, "application/json", body.dump());
  }
  if (target == "/") target = "/index.html";
  if (target.find("..") != std::string::npos) {
    return reply(http::status::bad_request, "text/plain", "bad path\n");
  }
  if (!ui_dir.empty()) {
    if (auto body = read_file(std::filesystem::path(ui_dir) / target.substr(1))) {
      return reply(http::status::ok, mime_type(target), std::move(*body));
    }
  }
  if (target == "/index.html") return reply(http::status::ok, "text/html", kBuiltinPage);
  return reply(http::status::not_found, "text/plain", "not found\n");
}

Server::Server(SimConfig config) : config_(std::move(config)) {
  session_ = std::make_unique<Session>(config_);
  impl_ = std::make_unique<Impl>(*session_, config_.server.ui_dir);
}

Server::~Server() {
  stop();
  wait();
}

void Server::start() {
  if (running_.exchange(true)) throw Error(ErrorCode::kState, "server already started");
  try {
    const auto port = static_cast<unsigned short>(config_.server.port);
    tcp::endpoint ep(net::ip::make_address("0.0.0.0"), port);
    impl_->acceptor.emplace(impl_->ioc);
    impl_->acceptor->open(ep.protocol());
    impl_->acceptor->set_option(net::socket_base::reuse_address(true));
    impl_->acceptor->bind(ep);
    impl_->acceptor->listen();
    port_ = impl_->acceptor->local_endpoint().port();
  } catch (const boost::system::system_error& e) {
    running_ = false;
    throw Error(ErrorCode::kIo, std::string("cannot listen: ") + e.what());
  }

  if (!out_dir_.empty()) {
    session_->on_trial_end([dir = out_dir_, n = 0](const task::TrialRecord&,
                                                   const std::string& trace) mutable {
      ++n;
      harness::write_text_file(dir + "/live_trial_" + std::to_string(n) + ".jsonl", trace);
    });
  }

  impl_->accept();
  io_thread_ = std::thread([this] { impl_->ioc.run(); });
  loop_thread_ = std::thread([this] {
    using clock = std::chrono::steady_clock;
    const auto period = std::chrono::duration_cast<clock::duration>(
        std::chrono::duration<double>(config_.harness.dt()));
    auto next = clock::now();
    while (running_) {
      session_->tick();
      if (session_->outbox().size() > 0) impl_->notify();
      next += period;
      const auto now = clock::now();
      // After a long stall, resume from now rather than bursting ticks.
      if (now - next > 10 * period) next = now;
      std::this_thread::sleep_until(next);
    }
  });
}

void Server::wait() {
  if (io_thread_.joinable()) io_thread_.join();
  if (loop_thread_.joinable()) loop_thread_.join();
}

void Server::stop() {
  running_ = false;
  impl_->ioc.stop();
}

}  // namespace vine::server
