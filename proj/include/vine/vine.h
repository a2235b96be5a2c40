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

#ifndef VINE_VINE_H_
#define VINE_VINE_H_

#include <stdint.h>

#if defined(VINE_BUILDING_LIBRARY)
#define VINE_API __attribute__((visibility("default")))
#else
#define VINE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

// Every fallible call returns a status; on failure vine_last_error() holds a
// message for the calling thread until its next failing call.
typedef enum vine_status {
  VINE_OK = 0,
  VINE_ERR_INVALID_ARGUMENT = 1,
  VINE_ERR_DEGENERATE_CONFIGURATION = 2,
  VINE_ERR_DEGENERATE_TARGET = 3,
  VINE_ERR_PARSE = 4,
  VINE_ERR_IO = 5,
  VINE_ERR_STATE = 6,
  VINE_ERR_INTERNAL = 99,
} vine_status;

typedef struct vine_config vine_config;
typedef struct vine_record vine_record;
typedef struct vine_server vine_server;

typedef struct vine_metrics {
  int completed;
  double completion_time;           // s
  double trajectory_length;         // m
  double mean_assistance;           // N, time average of the guidance force
  double assistance_per_iteration;  // N per loop iteration
  double precision;                 // m, mean planar placement error
  uint64_t ticks;                   // loop iterations in the trace
} vine_metrics;

VINE_API const char* vine_version(void);
VINE_API const char* vine_last_error(void);
VINE_API const char* vine_status_string(vine_status status);

// Strings returned through char** out-parameters are owned by the caller.
VINE_API void vine_string_free(char* s);

// --- configuration ---------------------------------------------------------

VINE_API vine_status vine_config_create(vine_config** out);
VINE_API void vine_config_destroy(vine_config* cfg);
VINE_API vine_status vine_config_load_toml(vine_config* cfg, const char* path);
VINE_API vine_status vine_config_apply_toml(vine_config* cfg, const char* toml_text);
// Dotted key as in the TOML file, e.g. ("paradigm.kind", "aan").
VINE_API vine_status vine_config_set(vine_config* cfg, const char* key, const char* value);
// Current value of a dotted key as JSON text, e.g. "harness.seed" -> "1".
VINE_API vine_status vine_config_get(const vine_config* cfg, const char* key, char** out_json);
VINE_API vine_status vine_config_load_world(vine_config* cfg, const char* path);
VINE_API vine_status vine_config_to_json(const vine_config* cfg, char** out_json);

// --- trials ----------------------------------------------------------------

VINE_API vine_status vine_run_trial(const vine_config* cfg, uint64_t seed, vine_record** out);
// Re-runs the recorded commands of a JSONL trace. When non-null,
// `out_recorded_summary` receives the summary line stored in the file.
VINE_API vine_status vine_replay_trace(const char* path, vine_record** out,
                                       char** out_recorded_summary);
VINE_API void vine_record_destroy(vine_record* rec);
VINE_API vine_status vine_record_metrics(const vine_record* rec, vine_metrics* out);
VINE_API vine_status vine_record_summary_json(const vine_record* rec, char** out_json);
VINE_API vine_status vine_record_trace_jsonl(const vine_record* rec, char** out_jsonl);
VINE_API vine_status vine_record_write_trace(const vine_record* rec, const char* path);
// One CSV row with the header line in front.
VINE_API vine_status vine_record_csv(const vine_record* rec, char** out_csv);

// `reps` trials with derived seeds. Per-trial traces go to `trace_dir` when
// it is non-null.
VINE_API vine_status vine_run_batch(const vine_config* cfg, uint64_t seed, int reps,
                                    const char* trace_dir, char** out_csv);
// Two-level sweep over the grid in the configuration.
VINE_API vine_status vine_run_factorial(const vine_config* cfg, uint64_t seed, char** out_csv,
                                        char** out_effects_csv);

// --- live server -----------------------------------------------------------

VINE_API vine_status vine_server_create(const vine_config* cfg, vine_server** out);
VINE_API void vine_server_destroy(vine_server* srv);
VINE_API vine_status vine_server_set_output_dir(vine_server* srv, const char* dir);
VINE_API vine_status vine_server_start(vine_server* srv);
VINE_API int vine_server_port(const vine_server* srv);
// Blocks until vine_server_stop is called from another thread.
VINE_API vine_status vine_server_wait(vine_server* srv);
VINE_API vine_status vine_server_stop(vine_server* srv);

#ifdef __cplusplus
}
#endif

#endif  // VINE_VINE_H_
