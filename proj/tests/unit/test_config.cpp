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

#include "core/config.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <fstream>

using namespace vine;
using harness::Factor;

namespace {

const std::string kSourceDir = VINE_SOURCE_DIR;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kState;
}

}  // namespace

TEST_CASE("shipped default config matches the built-in defaults", "[config]") {
  SimConfig loaded;
  load_toml_file(loaded, kSourceDir + "/config/default.toml");
  CHECK(to_json(loaded) == to_json(SimConfig{}));
  CHECK_NOTHROW(loaded.validate());
}

TEST_CASE("shipped world file matches the built-in layout", "[config]") {
  const auto w = plant::load_world(kSourceDir + "/worlds/default.json");
  CHECK(plant::world_to_json(w) == plant::world_to_json(plant::default_world()));
}

TEST_CASE("TOML overlays only the keys it names", "[config]") {
  SimConfig cfg;
  apply_toml(cfg, R"(
[paradigm]
kind = "aan"
[paradigm.aan]
delta = 5.0
[operator.naive]
max_speed = 0.2
[harness]
seed = 42
operator = "expert"
[harness.factorial]
xi_a = 2.0
)");
  CHECK(cfg.paradigm.kind == paradigms::ParadigmKind::kAssistAsNeeded);
  CHECK(cfg.paradigm.delta == 5.0);
  CHECK(cfg.paradigm.k_max == 50.0);
  CHECK(cfg.naive.max_speed == 0.2);
  CHECK(cfg.naive.perception_noise_std == 0.03);
  CHECK(cfg.harness.seed == 42);
  CHECK(cfg.harness.operator_source == OperatorSource::kExpert);
  CHECK(cfg.grid[Factor::kXiAway].low == 2.0);
  CHECK_FALSE(cfg.grid[Factor::kXiAway].active());
  CHECK(cfg.grid.cell_count() == 32);
}

TEST_CASE("config errors carry codes", "[config]") {
  SimConfig cfg;
  CHECK(code_of([&] { apply_toml(cfg, "[plant]\nwarp = 3\n"); }) == ErrorCode::kParse);
  CHECK(code_of([&] { apply_toml(cfg, "[bogus]\n"); }) == ErrorCode::kParse);
  CHECK(code_of([&] { apply_toml(cfg, "[paradigm]\nkind = \"magic\"\n"); }) == ErrorCode::kParse);
  CHECK(code_of([&] { apply_toml(cfg, "[plant]\ncapture_radius = \"big\"\n"); }) ==
        ErrorCode::kParse);
  CHECK(code_of([&] { apply_toml(cfg, "not toml = = ="); }) == ErrorCode::kParse);
  CHECK(code_of([&] { load_toml_file(cfg, "/nonexistent.toml"); }) == ErrorCode::kIo);

  SimConfig strong;
  apply_toml(strong, "[paradigm]\nf_max = 9.0\n");
  CHECK(code_of([&] { strong.validate(); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("set_value takes dotted keys and bare words", "[config]") {
  SimConfig cfg;
  set_value(cfg, "control.kp_e", "2.5");
  CHECK(cfg.control.kp_e == 2.5);
  set_value(cfg, "paradigm.kind", "asme");
  CHECK(cfg.paradigm.kind == paradigms::ParadigmKind::kAutonomousSteeringManualEversion);
  set_value(cfg, "operator.expert.reaction_delay", "0.5");
  CHECK(cfg.expert.reaction_delay == 0.5);
  set_value(cfg, "harness.factorial.f_max", "[2.0, 6.0]");
  CHECK(cfg.grid[Factor::kFMax].high == 6.0);

  SECTION("seeds use the full unsigned range") {
    set_value(cfg, "harness.seed", "18446744073709551615");
    CHECK(cfg.harness.seed == 18446744073709551615ULL);
    set_value(cfg, "harness.seed", "9223372036854775808");
    CHECK(cfg.harness.seed == 9223372036854775808ULL);
  }

  CHECK_THROWS_AS(set_value(cfg, "kp_e", "1"), Error);
  CHECK_THROWS_AS(set_value(cfg, "control.nope", "1"), Error);
}

TEST_CASE("JSON serialization round trips", "[config]") {
  SimConfig cfg;
  apply_toml(cfg, "[paradigm]\nkind = \"fixed\"\n[harness]\nseed = 77\nstart_tip = [0.1, 0.0, -0.4]\n");
  cfg.world.items[0].x = -0.12;
  const SimConfig back = config_from_json(to_json(cfg));
  CHECK(to_json(back) == to_json(cfg));
  CHECK(back.world.items[0].x == -0.12);
  CHECK(back.harness.start_tip.x() == 0.1);
}

TEST_CASE("operator source tokens", "[config]") {
  for (auto s : {OperatorSource::kExpert, OperatorSource::kNaive, OperatorSource::kNone}) {
    CHECK(parse_operator(to_token(s)) == s);
  }
  CHECK_FALSE(parse_operator("robot"));
  SimConfig cfg;
  cfg.harness.operator_source = OperatorSource::kNone;
  CHECK(cfg.active_profile() == nullptr);
  cfg.harness.operator_source = OperatorSource::kExpert;
  CHECK(cfg.active_profile()->name == "expert");
}
