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

#include "vine/vine.h"

#include "core/config.hpp"
#include "core/harness.hpp"
#include "core/server.hpp"
#include "core/trial.hpp"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

struct vine_config {
  vine::SimConfig cfg;
};

struct vine_record {
  vine::SimConfig cfg;
  std::uint64_t seed = 0;
  vine::task::TrialRecord record;
};

struct vine_server {
  std::unique_ptr<vine::server::Server> server;
};

namespace {

thread_local std::string g_last_error;

vine_status fail(vine_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

vine_status from_code(vine::ErrorCode code) {
  switch (code) {
    case vine::ErrorCode::kInvalidArgument: return VINE_ERR_INVALID_ARGUMENT;
    case vine::ErrorCode::kDegenerateConfiguration: return VINE_ERR_DEGENERATE_CONFIGURATION;
    case vine::ErrorCode::kDegenerateTarget: return VINE_ERR_DEGENERATE_TARGET;
    case vine::ErrorCode::kParse: return VINE_ERR_PARSE;
    case vine::ErrorCode::kIo: return VINE_ERR_IO;
    case vine::ErrorCode::kState: return VINE_ERR_STATE;
  }
  return VINE_ERR_INTERNAL;
}

// Runs `body` and maps any exception to a status; nothing escapes the ABI.
template <typename F>
vine_status guard(F&& body) {
  try {
    body();
    return VINE_OK;
  } catch (const vine::Error& e) {
    return fail(from_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(VINE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(VINE_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(VINE_ERR_INTERNAL, "unknown exception");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw vine::Error(vine::ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

}  // namespace

extern "C" {

const char* vine_version(void) { return "0.1.0"; }

const char* vine_last_error(void) { return g_last_error.c_str(); }

const char* vine_status_string(vine_status status) {
  switch (status) {
    case VINE_OK: return "ok";
    case VINE_ERR_INVALID_ARGUMENT: return "invalid argument";
    case VINE_ERR_DEGENERATE_CONFIGURATION: return "degenerate configuration";
    case VINE_ERR_DEGENERATE_TARGET: return "degenerate target";
    case VINE_ERR_PARSE: return "parse error";
    case VINE_ERR_IO: return "i/o error";
    case VINE_ERR_STATE: return "invalid state";
    case VINE_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void vine_string_free(char* s) { std::free(s); }

vine_status vine_config_create(vine_config** out) {
  return guard([&] {
    require(out, "out");
    *out = new vine_config();
  });
}

void vine_config_destroy(vine_config* cfg) { delete cfg; }

vine_status vine_config_load_toml(vine_config* cfg, const char* path) {
  return guard([&] {
    require(cfg && path, "config or path");
    vine::SimConfig next = cfg->cfg;
    vine::load_toml_file(next, path);
    cfg->cfg = std::move(next);
  });
}

vine_status vine_config_apply_toml(vine_config* cfg, const char* toml_text) {
  return guard([&] {
    require(cfg && toml_text, "config or text");
    vine::SimConfig next = cfg->cfg;
    vine::apply_toml(next, toml_text);
    cfg->cfg = std::move(next);
  });
}

vine_status vine_config_set(vine_config* cfg, const char* key, const char* value) {
  return guard([&] {
    require(cfg && key && value, "config, key or value");
    vine::SimConfig next = cfg->cfg;
    vine::set_value(next, key, value);
    cfg->cfg = std::move(next);
  });
}

vine_status vine_config_get(const vine_config* cfg, const char* key, char** out_json) {
  return guard([&] {
    require(cfg && key && out_json, "config, key or out");
    nlohmann::json node = vine::to_json(cfg->cfg);
    std::string path(key);
    std::size_t start = 0;
    while (start <= path.size()) {
      const auto dot = path.find('.', start);
      const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos
                                                                           : dot - start);
      if (!node.is_object() || !node.contains(part)) {
        throw vine::Error(vine::ErrorCode::kInvalidArgument, "unknown config key: " + path);
      }
      node = node[part];
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    *out_json = dup_string(node.dump());
  });
}

vine_status vine_config_load_world(vine_config* cfg, const char* path) {
  return guard([&] {
    require(cfg && path, "config or path");
    cfg->cfg.world = vine::plant::load_world(path);
  });
}

vine_status vine_config_to_json(const vine_config* cfg, char** out_json) {
  return guard([&] {
    require(cfg && out_json, "config or out");
    *out_json = dup_string(vine::to_json(cfg->cfg).dump(2));
  });
}

vine_status vine_run_trial(const vine_config* cfg, uint64_t seed, vine_record** out) {
  return guard([&] {
    require(cfg && out, "config or out");
    auto rec = std::make_unique<vine_record>();
    rec->cfg = cfg->cfg;
    rec->seed = seed;
    rec->record = vine::harness::run_trial(cfg->cfg, seed);
    *out = rec.release();
  });
}

vine_status vine_replay_trace(const char* path, vine_record** out, char** out_recorded_summary) {
  return guard([&] {
    require(path && out, "path or out");
    auto loaded = vine::harness::load_trace(path);
    auto rec = std::make_unique<vine_record>();
    rec->cfg = loaded.config;
    rec->seed = loaded.seed;
    rec->record = vine::harness::replay_inputs(loaded.config, loaded.seed, loaded.inputs);
    if (out_recorded_summary) {
      *out_recorded_summary = loaded.summary.is_null() ? nullptr : dup_string(loaded.summary.dump());
    }
    *out = rec.release();
  });
}

void vine_record_destroy(vine_record* rec) { delete rec; }

vine_status vine_record_metrics(const vine_record* rec, vine_metrics* out) {
  return guard([&] {
    require(rec && out, "record or out");
    const auto& r = rec->record;
    out->completed = r.completed ? 1 : 0;
    out->completion_time = r.completion_time;
    out->trajectory_length = r.trajectory_length;
    out->mean_assistance = r.mean_assistance;
    out->assistance_per_iteration = r.assistance_per_iteration;
    out->precision = r.precision;
    out->ticks = r.trace.empty() ? 0 : r.trace.size() - 1;
  });
}

vine_status vine_record_summary_json(const vine_record* rec, char** out_json) {
  return guard([&] {
    require(rec && out_json, "record or out");
    auto j = vine::harness::record_summary_json(rec->record);
    j["seed"] = rec->seed;
    j["paradigm"] = vine::paradigms::to_token(rec->cfg.paradigm.kind);
    j["operator"] = vine::to_token(rec->cfg.harness.operator_source);
    *out_json = dup_string(j.dump());
  });
}

vine_status vine_record_trace_jsonl(const vine_record* rec, char** out_jsonl) {
  return guard([&] {
    require(rec && out_jsonl, "record or out");
    *out_jsonl = dup_string(vine::harness::trace_to_jsonl(rec->record, rec->cfg, rec->seed));
  });
}

vine_status vine_record_write_trace(const vine_record* rec, const char* path) {
  return guard([&] {
    require(rec && path, "record or path");
    vine::harness::write_text_file(path,
                                   vine::harness::trace_to_jsonl(rec->record, rec->cfg, rec->seed));
  });
}

vine_status vine_record_csv(const vine_record* rec, char** out_csv) {
  return guard([&] {
    require(rec && out_csv, "record or out");
    std::string csv = vine::harness::record_csv_header() + "\n" +
                      vine::harness::record_csv_row(
                          rec->record, "trial", vine::paradigms::to_token(rec->cfg.paradigm.kind),
                          vine::to_token(rec->cfg.harness.operator_source), rec->seed) +
                      "\n";
    *out_csv = dup_string(csv);
  });
}

vine_status vine_run_batch(const vine_config* cfg, uint64_t seed, int reps, const char* trace_dir,
                           char** out_csv) {
  return guard([&] {
    require(cfg && out_csv, "config or out");
    const bool keep = trace_dir != nullptr;
    auto rows = vine::harness::run_batch(cfg->cfg, seed, reps, keep);
    if (keep) {
      for (const auto& r : rows) {
        vine::harness::write_text_file(
            std::string(trace_dir) + "/" + r.trial_id + ".jsonl",
            vine::harness::trace_to_jsonl(r.record, cfg->cfg, r.seed));
      }
    }
    *out_csv = dup_string(vine::harness::batch_csv(cfg->cfg, rows));
  });
}

vine_status vine_run_factorial(const vine_config* cfg, uint64_t seed, char** out_csv,
                               char** out_effects_csv) {
  return guard([&] {
    require(cfg && out_csv, "config or out");
    auto result = vine::harness::run_factorial(cfg->cfg, cfg->cfg.grid, seed);
    std::string rows = vine::harness::factorial_csv(result);
    std::string effects = vine::harness::main_effects_csv(result);
    *out_csv = dup_string(rows);
    if (out_effects_csv) *out_effects_csv = dup_string(effects);
  });
}

vine_status vine_server_create(const vine_config* cfg, vine_server** out) {
  return guard([&] {
    require(cfg && out, "config or out");
    auto srv = std::make_unique<vine_server>();
    srv->server = std::make_unique<vine::server::Server>(cfg->cfg);
    *out = srv.release();
  });
}

void vine_server_destroy(vine_server* srv) { delete srv; }

vine_status vine_server_set_output_dir(vine_server* srv, const char* dir) {
  return guard([&] {
    require(srv && dir, "server or dir");
    srv->server->set_output_dir(dir);
  });
}

vine_status vine_server_start(vine_server* srv) {
  return guard([&] {
    require(srv, "server");
    srv->server->start();
  });
}

int vine_server_port(const vine_server* srv) { return srv ? srv->server->port() : 0; }

vine_status vine_server_wait(vine_server* srv) {
  return guard([&] {
    require(srv, "server");
    srv->server->wait();
  });
}

vine_status vine_server_stop(vine_server* srv) {
  return guard([&] {
    require(srv, "server");
    srv->server->stop();
  });
}

}  // extern "C"
