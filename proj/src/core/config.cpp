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

#include <toml.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace vine {

using nlohmann::json;

std::string_view to_token(OperatorSource s) {
  switch (s) {
    case OperatorSource::kExpert: return "expert";
    case OperatorSource::kNaive: return "naive";
    case OperatorSource::kNone: return "none";
  }
  return "none";
}

std::optional<OperatorSource> parse_operator(std::string_view token) {
  if (token == "expert") return OperatorSource::kExpert;
  if (token == "naive") return OperatorSource::kNaive;
  if (token == "none") return OperatorSource::kNone;
  return std::nullopt;
}

const operators::OperatorProfile* SimConfig::active_profile() const {
  switch (harness.operator_source) {
    case OperatorSource::kExpert: return &expert;
    case OperatorSource::kNaive: return &naive;
    case OperatorSource::kNone: return nullptr;
  }
  return nullptr;
}

void SimConfig::validate() const {
  paradigm.validate();
  control.validate();
  expert.validate(paradigm.f_max);
  naive.validate(paradigm.f_max);
  grid.validate();
  if (!(harness.refresh_hz > 0.0) || !(harness.timeout > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "harness refresh_hz and timeout must be positive");
  }
  if (!(harness.epsilon >= 0.0 && harness.epsilon <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must lie in [0, 1]");
  }
  if (harness.repetitions < 1) throw Error(ErrorCode::kInvalidArgument, "reps must be >= 1");
  if (!(plant.steering_rate_limit > 0.0 && plant.eversion_rate_limit > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "plant rate limits must be positive");
  }
  if (!(harness.start_tip.z() < 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "start tip must lie below the base");
  }
}

namespace {

json vec(const CartesianPoint& p) { return json::array({p.x(), p.y(), p.z()}); }

CartesianPoint read_vec(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3) {
    throw Error(ErrorCode::kParse, key + ": expected [x, y, z]");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json profile_json(const operators::OperatorProfile& p) {
  return {{"perception_noise_std", p.perception_noise_std},
          {"fixation_time", p.fixation_time},
          {"max_speed", p.max_speed},
          {"approach_gain", p.approach_gain},
          {"reaction_delay", p.reaction_delay},
          {"pause_rate", p.pause_rate},
          {"pause_duration", p.pause_duration},
          {"compliance_gain", p.compliance_gain},
          {"button_accuracy_radius", p.button_accuracy_radius},
          {"settle_speed", p.settle_speed},
          {"search_timeout", p.search_timeout},
          {"orientation_time", p.orientation_time},
          {"search_focus", p.search_focus},
          {"guidance_trust", p.guidance_trust}};
}

/// Reads keys of one section, rejecting any it does not know.
class Section {
 public:
  Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw Error(ErrorCode::kParse, "[" + name_ + "] must be a table");
  }
  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) throw Error(ErrorCode::kParse, "unknown key '" + name_ + "." + k + "'");
    }
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!j_[key].is_number()) throw Error(ErrorCode::kParse, "");
      }
      out = j_[key].get<T>();
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParse, "bad value for '" + name_ + "." + key + "'");
    }
  }
  void read_vec(const char* key, CartesianPoint& out) {
    seen_.insert(key);
    if (j_.contains(key)) out = vine::read_vec(j_[key], name_ + "." + key);
  }
  void read_levels(const char* key, harness::FactorLevels& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const auto& a = j_[key];
    if (a.is_number()) {
      out = {a.get<double>(), a.get<double>()};
    } else if (a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number()) {
      out = {a[0].get<double>(), a[1].get<double>()};
    } else {
      throw Error(ErrorCode::kParse, name_ + "." + key + ": expected [low, high] or a number");
    }
  }
  bool has(const char* key) const { return j_.contains(key); }
  const json& sub(const char* key) {
    seen_.insert(key);
    return j_[key];
  }

 private:
  const json& j_;
  std::string name_;
  std::set<std::string> seen_;
};

void apply_profile(const json& j, const std::string& name, operators::OperatorProfile& p) {
  Section s(j, name);
  s.read("perception_noise_std", p.perception_noise_std);
  s.read("fixation_time", p.fixation_time);
  s.read("max_speed", p.max_speed);
  s.read("approach_gain", p.approach_gain);
  s.read("reaction_delay", p.reaction_delay);
  s.read("pause_rate", p.pause_rate);
  s.read("pause_duration", p.pause_duration);
  s.read("compliance_gain", p.compliance_gain);
  s.read("button_accuracy_radius", p.button_accuracy_radius);
  s.read("settle_speed", p.settle_speed);
  s.read("search_timeout", p.search_timeout);
  s.read("orientation_time", p.orientation_time);
  s.read("search_focus", p.search_focus);
  s.read("guidance_trust", p.guidance_trust);
}

void apply_json(SimConfig& cfg, const json& root) {
  Section top(root, "");
  if (root.contains("plant")) {
    Section s(top.sub("plant"), "plant");
    auto& p = cfg.plant;
    s.read("steering_rate_limit", p.steering_rate_limit);
    s.read("eversion_rate_limit", p.eversion_rate_limit);
    s.read("passive_growth", p.passive_growth);
    s.read("pressurized", p.pressurized);
    s.read("min_length", p.min_length);
    s.read("capture_radius", p.capture_radius);
    s.read("release_time", p.release_time);
  }
  if (root.contains("control")) {
    Section s(top.sub("control"), "control");
    s.read("kp_e", cfg.control.kp_e);
    s.read("ff_e", cfg.control.ff_e);
    s.read("kp_s", cfg.control.kp_s);
    s.read("kd_s", cfg.control.kd_s);
    s.read("epsilon", cfg.harness.epsilon);
  }
  if (root.contains("paradigm")) {
    Section s(top.sub("paradigm"), "paradigm");
    auto& p = cfg.paradigm;
    std::string kind;
    s.read("kind", kind);
    if (!kind.empty()) {
      auto k = paradigms::parse_kind(kind);
      if (!k) throw Error(ErrorCode::kParse, "unknown paradigm '" + kind + "'");
      p.kind = *k;
    }
    s.read("f_max", p.f_max);
    if (s.has("aan")) {
      Section a(s.sub("aan"), "paradigm.aan");
      a.read("k_max", p.k_max);
      a.read("delta", p.delta);
      a.read("xi_s", p.xi_steady);
      a.read("xi_c", p.xi_closing);
      a.read("xi_a", p.xi_away);
      a.read("th_d", p.th_distance);
      a.read("th_m", p.th_rate);
      a.read("rate_window", p.rate_window);
    }
    if (s.has("fixed")) {
      Section f(s.sub("fixed"), "paradigm.fixed");
      f.read("k", p.k_fixed);
      f.read("b", p.b_fixed);
      f.read("filter_len", p.filter_len);
      f.read("damped_projection", p.damped_projection);
    }
  }
  if (root.contains("operator")) {
    Section s(top.sub("operator"), "operator");
    if (s.has("expert")) apply_profile(s.sub("expert"), "operator.expert", cfg.expert);
    if (s.has("naive")) apply_profile(s.sub("naive"), "operator.naive", cfg.naive);
  }
  if (root.contains("harness")) {
    Section s(top.sub("harness"), "harness");
    auto& h = cfg.harness;
    s.read("refresh_hz", h.refresh_hz);
    s.read("timeout", h.timeout);
    s.read("seed", h.seed);
    s.read("reps", h.repetitions);
    std::string op;
    s.read("operator", op);
    if (!op.empty()) {
      auto o = parse_operator(op);
      if (!o) throw Error(ErrorCode::kParse, "unknown operator '" + op + "'");
      h.operator_source = *o;
    }
    s.read("workers", h.workers);
    s.read_vec("start_tip", h.start_tip);
    s.read("lift_height", cfg.task.lift_height);
    s.read("lift_tolerance", cfg.task.lift_tolerance);
    if (s.has("factorial")) {
      Section f(s.sub("factorial"), "harness.factorial");
      using harness::Factor;
      f.read_levels("f_max", cfg.grid[Factor::kFMax]);
      f.read_levels("k_max", cfg.grid[Factor::kKMax]);
      f.read_levels("delta", cfg.grid[Factor::kDelta]);
      f.read_levels("xi_s", cfg.grid[Factor::kXiSteady]);
      f.read_levels("xi_c", cfg.grid[Factor::kXiClosing]);
      f.read_levels("xi_a", cfg.grid[Factor::kXiAway]);
    }
    cfg.grid.repetitions = h.repetitions;
  }
  if (root.contains("server")) {
    Section s(top.sub("server"), "server");
    auto& v = cfg.server;
    s.read("port", v.port);
    s.read("broadcast_hz", v.broadcast_hz);
    s.read_vec("workspace_min", v.workspace_min);
    s.read_vec("workspace_max", v.workspace_max);
    s.read("velocity_scale", v.velocity_scale);
    s.read("frame_queue", v.frame_queue_capacity);
    s.read("ui_dir", v.ui_dir);
  }
  if (root.contains("world")) {
    cfg.world = plant::world_from_json(top.sub("world").dump());
  }
}

json toml_to_json(const toml::node& node) {
  if (auto t = node.as_table()) {
    json out = json::object();
    for (const auto& [k, v] : *t) out[std::string(k.str())] = toml_to_json(v);
    return out;
  }
  if (auto a = node.as_array()) {
    json out = json::array();
    for (const auto& v : *a) out.push_back(toml_to_json(v));
    return out;
  }
  if (auto v = node.as_integer()) return v->get();
  if (auto v = node.as_floating_point()) return v->get();
  if (auto v = node.as_boolean()) return v->get();
  if (auto v = node.as_string()) return v->get();
  throw Error(ErrorCode::kParse, "unsupported TOML value type");
}

}  // namespace

void apply_toml(SimConfig& cfg, const std::string& toml_text) {
  toml::table table;
  try {
    table = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("config: ") + std::string(e.description()));
  }
  apply_json(cfg, toml_to_json(table));
}

void load_toml_file(SimConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  apply_toml(cfg, ss.str());
}

void set_value(SimConfig& cfg, const std::string& dotted_key, const std::string& value) {
  const auto dot = dotted_key.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == dotted_key.size()) {
    throw Error(ErrorCode::kInvalidArgument, "expected section.key, got '" + dotted_key + "'");
  }
  const std::string section = dotted_key.substr(0, dot);
  const std::string key = dotted_key.substr(dot + 1);
  // TOML integers are signed 64-bit; seeds use the full unsigned range.
  std::uint64_t big = 0;
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), big);
  if (ec == std::errc() && end == value.data() + value.size() &&
      big > static_cast<std::uint64_t>(INT64_MAX)) {
    std::string pointer = "/" + section + "/" + key;
    std::replace(pointer.begin(), pointer.end(), '.', '/');
    json patch;
    patch[json::json_pointer(pointer)] = big;
    apply_json(cfg, patch);
    return;
  }
  std::string doc = "[" + section + "]\n" + key + " = " + value + "\n";
  toml::table probe;
  try {
    probe = toml::parse(doc);
  } catch (const toml::parse_error&) {
    doc = "[" + section + "]\n" + key + " = " + json(value).dump() + "\n";
  }
  apply_toml(cfg, doc);
}

json to_json(const SimConfig& c) {
  json j;
  j["plant"] = {{"steering_rate_limit", c.plant.steering_rate_limit},
                {"eversion_rate_limit", c.plant.eversion_rate_limit},
                {"passive_growth", c.plant.passive_growth},
                {"pressurized", c.plant.pressurized},
                {"min_length", c.plant.min_length},
                {"capture_radius", c.plant.capture_radius},
                {"release_time", c.plant.release_time}};
  j["control"] = {{"kp_e", c.control.kp_e}, {"ff_e", c.control.ff_e}, {"kp_s", c.control.kp_s},
                  {"kd_s", c.control.kd_s}, {"epsilon", c.harness.epsilon}};
  const auto& p = c.paradigm;
  j["paradigm"] = {{"kind", paradigms::to_token(p.kind)},
                   {"f_max", p.f_max},
                   {"aan",
                    {{"k_max", p.k_max}, {"delta", p.delta}, {"xi_s", p.xi_steady},
                     {"xi_c", p.xi_closing}, {"xi_a", p.xi_away}, {"th_d", p.th_distance},
                     {"th_m", p.th_rate}, {"rate_window", p.rate_window}}},
                   {"fixed",
                    {{"k", p.k_fixed}, {"b", p.b_fixed}, {"filter_len", p.filter_len},
                     {"damped_projection", p.damped_projection}}}};
  j["operator"] = {{"expert", profile_json(c.expert)}, {"naive", profile_json(c.naive)}};
  using harness::Factor;
  auto levels = [&](Factor f) { return json::array({c.grid[f].low, c.grid[f].high}); };
  j["harness"] = {{"refresh_hz", c.harness.refresh_hz},
                  {"timeout", c.harness.timeout},
                  {"seed", c.harness.seed},
                  {"reps", c.harness.repetitions},
                  {"operator", to_token(c.harness.operator_source)},
                  {"workers", c.harness.workers},
                  {"start_tip", vec(c.harness.start_tip)},
                  {"lift_height", c.task.lift_height},
                  {"lift_tolerance", c.task.lift_tolerance},
                  {"factorial",
                   {{"f_max", levels(Factor::kFMax)}, {"k_max", levels(Factor::kKMax)},
                    {"delta", levels(Factor::kDelta)}, {"xi_s", levels(Factor::kXiSteady)},
                    {"xi_c", levels(Factor::kXiClosing)}, {"xi_a", levels(Factor::kXiAway)}}}};
  j["server"] = {{"port", c.server.port},
                 {"broadcast_hz", c.server.broadcast_hz},
                 {"workspace_min", vec(c.server.workspace_min)},
                 {"workspace_max", vec(c.server.workspace_max)},
                 {"velocity_scale", c.server.velocity_scale},
                 {"frame_queue", c.server.frame_queue_capacity},
                 {"ui_dir", c.server.ui_dir}};
  j["world"] = json::parse(plant::world_to_json(c.world));
  return j;
}

SimConfig config_from_json(const json& j) {
  SimConfig cfg;
  apply_json(cfg, j);
  return cfg;
}

}  // namespace vine
