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

#include "core/control.hpp"
#include "core/factor_grid.hpp"
#include "core/operators.hpp"
#include "core/paradigms.hpp"
#include "core/plant.hpp"
#include "core/protocol.hpp"
#include "core/task.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>

namespace vine {

/// Which operator emits commands: a synthetic preset or an external source
/// (live client or a recorded trace).
enum class OperatorSource { kExpert, kNaive, kNone };

std::string_view to_token(OperatorSource s);
std::optional<OperatorSource> parse_operator(std::string_view token);

struct HarnessConfig {
  double refresh_hz = 100.0;
  double timeout = 120.0;  // simulated s
  std::uint64_t seed = 1;
  int repetitions = 3;
  OperatorSource operator_source = OperatorSource::kNaive;
  unsigned workers = 1;
  double epsilon = 0.3;    // actuation redistribution
  CartesianPoint start_tip{0.0, 0.0, -0.5};

  double dt() const { return 1.0 / refresh_hz; }
};

/// Everything a trial needs; loadable from TOML, serializable to JSON for
/// trace headers.
struct SimConfig {
  plant::PlantConfig plant;
  control::ControllerGains control;
  paradigms::ParadigmConfig paradigm;
  task::TaskConfig task;
  operators::OperatorProfile expert = operators::expert_profile();
  operators::OperatorProfile naive = operators::naive_profile();
  HarnessConfig harness;
  harness::FactorGrid grid;
  server::ServerConfig server;
  plant::World world = plant::default_world();

  const operators::OperatorProfile* active_profile() const;
  void validate() const;
};

/// Overlays a TOML document (sections [plant], [control], [paradigm],
/// [paradigm.aan], [paradigm.fixed], [operator.expert], [operator.naive],
/// [harness], [harness.factorial], [server]). Unknown keys are errors.
void apply_toml(SimConfig& cfg, const std::string& toml_text);
void load_toml_file(SimConfig& cfg, const std::string& path);

/// Sets one dotted key, e.g. set_value(cfg, "control.kp_e", "2.5"). The
/// value is parsed as a TOML value; bare words are taken as strings.
void set_value(SimConfig& cfg, const std::string& dotted_key, const std::string& value);

nlohmann::json to_json(const SimConfig& cfg);
SimConfig config_from_json(const nlohmann::json& j);

}  // namespace vine
