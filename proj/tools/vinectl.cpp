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

// vinectl: command-line front end over the vine C API.

#include "vine/vine.h"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace {

struct CliError {
  vine_status status;
  std::string message;
};

void check(vine_status s, const std::string& what) {
  if (s != VINE_OK) throw CliError{s, what + ": " + vine_last_error()};
}

// Owns a malloc'd string from the library.
struct OwnedString {
  char* p = nullptr;
  ~OwnedString() { vine_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

using ConfigPtr = std::unique_ptr<vine_config, decltype(&vine_config_destroy)>;
using RecordPtr = std::unique_ptr<vine_record, decltype(&vine_record_destroy)>;
using ServerPtr = std::unique_ptr<vine_server, decltype(&vine_server_destroy)>;

struct Options {
  std::string paradigm;
  std::string op;
  std::string world;
  std::vector<std::string> configs;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> reps;
  std::optional<int> port;
  std::optional<double> broadcast_hz;
  std::optional<unsigned> workers;
  std::string ui_dir;
  std::string trace;
};

void write_file(const std::string& path, const std::string& text) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw CliError{VINE_ERR_IO, "cannot write " + path};
}

ConfigPtr build_config(const Options& o) {
  vine_config* raw = nullptr;
  check(vine_config_create(&raw), "config");
  ConfigPtr cfg(raw, &vine_config_destroy);
  for (const auto& path : o.configs) check(vine_config_load_toml(cfg.get(), path.c_str()), path);
  if (!o.world.empty()) check(vine_config_load_world(cfg.get(), o.world.c_str()), o.world);
  auto set = [&](const char* key, const std::string& value) {
    check(vine_config_set(cfg.get(), key, value.c_str()), std::string("--") + key);
  };
  if (!o.paradigm.empty()) set("paradigm.kind", o.paradigm);
  if (!o.op.empty()) set("harness.operator", o.op);
  if (o.seed) set("harness.seed", std::to_string(*o.seed));
  if (o.reps) set("harness.reps", std::to_string(*o.reps));
  if (o.workers) set("harness.workers", std::to_string(*o.workers));
  if (o.port) set("server.port", std::to_string(*o.port));
  if (o.broadcast_hz) set("server.broadcast_hz", std::to_string(*o.broadcast_hz));
  if (!o.ui_dir.empty()) set("server.ui_dir", o.ui_dir);
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw CliError{VINE_ERR_INVALID_ARGUMENT, "--set needs key=value"};
    check(vine_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()), kv);
  }
  return cfg;
}

std::string get_value(const vine_config* cfg, const char* key) {
  OwnedString s;
  check(vine_config_get(cfg, key, &s.p), key);
  return s.str();
}

std::uint64_t master_seed(const vine_config* cfg) {
  return std::stoull(get_value(cfg, "harness.seed"));
}

int cmd_run_trial(const Options& o) {
  auto cfg = build_config(o);
  vine_record* raw = nullptr;
  check(vine_run_trial(cfg.get(), master_seed(cfg.get()), &raw), "run-trial");
  RecordPtr rec(raw, &vine_record_destroy);
  OwnedString summary;
  check(vine_record_summary_json(rec.get(), &summary.p), "summary");
  if (!o.out.empty()) {
    OwnedString csv;
    check(vine_record_csv(rec.get(), &csv.p), "csv");
    write_file(o.out + "/trial.csv", csv.str());
    check(vine_record_write_trace(rec.get(), (o.out + "/trace.jsonl").c_str()), "trace");
  }
  std::cout << summary.str() << '\n';
  return 0;
}

int cmd_run_batch(const Options& o) {
  auto cfg = build_config(o);
  const int reps = std::stoi(get_value(cfg.get(), "harness.reps"));
  const std::string trace_dir = o.out.empty() ? "" : o.out + "/traces";
  OwnedString csv;
  check(vine_run_batch(cfg.get(), master_seed(cfg.get()), reps,
                       trace_dir.empty() ? nullptr : trace_dir.c_str(), &csv.p),
        "run-batch");
  if (o.out.empty()) {
    std::cout << csv.str();
  } else {
    write_file(o.out + "/batch.csv", csv.str());
    std::cerr << "wrote " << reps << " trials to " << o.out << '\n';
  }
  return 0;
}

int cmd_run_factorial(const Options& o) {
  auto cfg = build_config(o);
  OwnedString rows;
  OwnedString effects;
  const auto t0 = std::chrono::steady_clock::now();
  check(vine_run_factorial(cfg.get(), master_seed(cfg.get()), &rows.p, &effects.p),
        "run-factorial");
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (o.out.empty()) {
    std::cout << rows.str() << '\n' << effects.str();
  } else {
    write_file(o.out + "/factorial.csv", rows.str());
    write_file(o.out + "/main_effects.csv", effects.str());
    std::cout << effects.str();
  }
  std::cerr << "factorial finished in " << secs << " s\n";
  return 0;
}

int cmd_replay(const Options& o) {
  vine_record* raw = nullptr;
  OwnedString recorded;
  check(vine_replay_trace(o.trace.c_str(), &raw, &recorded.p), "replay");
  RecordPtr rec(raw, &vine_record_destroy);
  vine_metrics m{};
  check(vine_record_metrics(rec.get(), &m), "metrics");
  OwnedString summary;
  check(vine_record_summary_json(rec.get(), &summary.p), "summary");
  if (!o.out.empty()) {
    check(vine_record_write_trace(rec.get(), (o.out + "/replay.jsonl").c_str()), "trace");
  }
  std::cout << summary.str() << '\n';
  if (!recorded.p) {
    std::cerr << "trace has no summary line; nothing to compare\n";
    return 0;
  }
  // Compare the metric fields of both summaries through the library's own
  // serialization of the replayed record.
  char* replay_lines = nullptr;
  check(vine_record_trace_jsonl(rec.get(), &replay_lines), "trace");
  std::string text = replay_lines;
  vine_string_free(replay_lines);
  const auto last = text.rfind('\n', text.size() - 2);
  std::string replay_summary = text.substr(last + 1);
  if (!replay_summary.empty() && replay_summary.back() == '\n') replay_summary.pop_back();
  if (replay_summary != recorded.str()) {
    std::cerr << "replay mismatch\n recorded: " << recorded.str()
              << "\n replayed: " << replay_summary << '\n';
    return 3;
  }
  std::cerr << "replay matches recorded metrics\n";
  return 0;
}

std::atomic<bool> g_stop{false};
extern "C" void on_signal(int) { g_stop = true; }

int cmd_serve(const Options& o) {
  auto cfg = build_config(o);
  vine_server* raw = nullptr;
  check(vine_server_create(cfg.get(), &raw), "serve");
  ServerPtr srv(raw, &vine_server_destroy);
  if (!o.out.empty()) check(vine_server_set_output_dir(srv.get(), o.out.c_str()), "--out");
  check(vine_server_start(srv.get()), "serve");
  std::cerr << "listening on http://0.0.0.0:" << vine_server_port(srv.get())
            << "  (websocket /ws, health /healthz)\n";
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  check(vine_server_stop(srv.get()), "stop");
  check(vine_server_wait(srv.get()), "wait");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vinesim: vine-robot shared-control simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", vine_version());
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.configs, "TOML config file (repeatable, applied in order)")
        ->check(CLI::ExistingFile);
    sub->add_option("--world", o.world, "World layout JSON")->check(CLI::ExistingFile);
    sub->add_option("--paradigm", o.paradigm, "Shared-control paradigm")
        ->check(CLI::IsMember({"teleop", "aan", "fixed", "msae", "asme", "auto"}));
    sub->add_option("--set", o.sets, "Override a config key: section.key=value");
    sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--out", o.out, "Output directory");
  };
  auto batchy = [&](CLI::App* sub) {
    sub->add_option("--operator", o.op, "Operator model")
        ->check(CLI::IsMember({"expert", "naive", "none"}));
    sub->add_option("--reps", o.reps, "Repetitions")->check(CLI::PositiveNumber);
    sub->add_option("--workers", o.workers, "Parallel trial workers")->check(CLI::PositiveNumber);
  };

  auto* trial = app.add_subcommand("run-trial", "Run one trial and print its metrics");
  common(trial);
  batchy(trial);
  auto* batch = app.add_subcommand("run-batch", "Run repeated trials and export CSV");
  common(batch);
  batchy(batch);
  auto* factorial = app.add_subcommand("run-factorial", "Run the two-level AAN parameter sweep");
  common(factorial);
  batchy(factorial);
  auto* replay = app.add_subcommand("replay", "Re-run a recorded trace and compare metrics");
  replay->add_option("trace", o.trace, "Trace JSONL file")->required()->check(CLI::ExistingFile);
  replay->add_option("--out", o.out, "Write the replayed trace here");
  auto* serve = app.add_subcommand("serve", "Serve live teleoperation sessions over WebSocket");
  common(serve);
  serve->add_option("--port", o.port, "TCP port (default 8080, 0 picks a free port)")
      ->check(CLI::Range(0, 65535));
  serve->add_option("--broadcast-hz", o.broadcast_hz, "State frame rate (default 30)")
      ->check(CLI::PositiveNumber);
  serve->add_option("--ui-dir", o.ui_dir, "Static UI directory served at /");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*trial) return cmd_run_trial(o);
    if (*batch) return cmd_run_batch(o);
    if (*factorial) return cmd_run_factorial(o);
    if (*replay) return cmd_replay(o);
    if (*serve) return cmd_serve(o);
  } catch (const CliError& e) {
    std::cerr << "vinectl: " << e.message << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "vinectl: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
