// Copyright 2026 The DVS Sampler Authors
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

#include "dvs/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "dvs/errors.hpp"
#include "dvs/toy_models.hpp"
#include "json.hpp"

namespace dvs {

using nlohmann::json;

std::string_view to_string(EmitKind kind) noexcept {
  switch (kind) {
    case EmitKind::kTrajectory:
      return "trajectory";
    case EmitKind::kSummary:
      return "summary";
    case EmitKind::kArcProfile:
      return "arc_profile";
    case EmitKind::kGammaSweep:
      return "gamma_sweep";
    case EmitKind::kScalingProbe:
      return "scaling_probe";
  }
  return "unknown";
}

EmitKind parse_emit_kind(std::string_view name) {
  for (auto k : {EmitKind::kTrajectory, EmitKind::kSummary, EmitKind::kArcProfile,
                 EmitKind::kGammaSweep, EmitKind::kScalingProbe}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown emit kind '" + std::string(name) + "'");
}

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                         std::string_view where) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) {
      throw ConfigError("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(std::string("missing required key '") + key + "'");
  return *it;
}

template <typename T>
T get_as(const json& v, const char* key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("key '") + key + "' has the wrong type");
  }
}

double get_number(const json& obj, const char* key, double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) throw ConfigError(std::string("key '") + key + "' must be a number");
  return it->get<double>();
}

std::uint64_t get_count(const json& v, const char* key) {
  if (!v.is_number_integer() || (v.is_number_integer() && v.get<std::int64_t>() < 0 &&
                                 !v.is_number_unsigned())) {
    throw ConfigError(std::string("key '") + key + "' must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

ControllerConfig parse_controller(const json& obj) {
  reject_unknown_keys(obj,
                      {"alpha", "beta", "kappa_ref", "gamma", "dt_base", "dt_min",
                       "dt_max", "active_ranges", "eps_num", "eps_bound"},
                      "schedule.controller");
  ControllerConfig c;
  c.alpha = get_number(obj, "alpha", c.alpha);
  c.beta = get_number(obj, "beta", c.beta);
  c.kappa_ref = get_number(obj, "kappa_ref", c.kappa_ref);
  c.gamma = get_number(obj, "gamma", c.gamma);
  c.dt_base = get_number(obj, "dt_base", c.dt_base);
  c.dt_min = get_number(obj, "dt_min", c.dt_min);
  c.dt_max = get_number(obj, "dt_max", c.dt_max);
  c.eps_num = get_number(obj, "eps_num", c.eps_num);
  c.eps_bound = get_number(obj, "eps_bound", c.eps_bound);
  if (auto it = obj.find("active_ranges"); it != obj.end()) {
    if (!it->is_array()) throw ConfigError("active_ranges must be an array of [lo, hi] pairs");
    for (const auto& r : *it) {
      if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
        throw ConfigError("active_ranges entries must be [lo, hi] number pairs");
      }
      c.active_ranges.push_back({r[0].get<double>(), r[1].get<double>()});
    }
  }
  return c;
}

ScheduleSpec parse_schedule(const json& obj) {
  reject_unknown_keys(obj, {"kind", "n_steps", "controller"}, "schedule");
  ScheduleSpec spec;
  spec.kind = parse_step_schedule_kind(get_as<std::string>(require(obj, "kind"), "kind"));
  if (auto it = obj.find("n_steps"); it != obj.end()) {
    spec.n_steps = static_cast<std::int64_t>(get_count(*it, "n_steps"));
  }
  if (auto it = obj.find("controller"); it != obj.end()) {
    if (spec.kind != StepScheduleKind::kDvs) {
      throw ConfigError("schedule.controller is only valid for the dvs schedule");
    }
    spec.controller = parse_controller(*it);
  }
  return spec;
}

json controller_to_json(const ControllerConfig& c) {
  json ranges = json::array();
  for (const auto& r : c.active_ranges) ranges.push_back({r.lo, r.hi});
  return json{{"alpha", c.alpha},     {"beta", c.beta},       {"kappa_ref", c.kappa_ref},
              {"gamma", c.gamma},     {"dt_base", c.dt_base}, {"dt_min", c.dt_min},
              {"dt_max", c.dt_max},   {"active_ranges", ranges},
              {"eps_num", c.eps_num}, {"eps_bound", c.eps_bound}};
}

}  // namespace

void RunConfig::validate() const {
  const ToyProblem p = make_toy_problem(problem);
  if (!(horizon > 0.0) || std::abs(horizon - p.horizon) > 1e-12) {
    throw ConfigError("T = " + std::to_string(horizon) + " does not match the horizon of '" +
                      problem + "' (" + std::to_string(p.horizon) + ")");
  }
  if (n_chains < 1) throw ConfigError("n_chains must be at least 1");
  schedule.validate(horizon);
}

RunConfig parse_run_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown_keys(root,
                      {"problem", "solver", "schedule", "seed", "n_chains", "T",
                       "output_dir", "emit"},
                      "config");
  RunConfig cfg;
  cfg.problem = get_as<std::string>(require(root, "problem"), "problem");
  cfg.solver = parse_solver_kind(get_as<std::string>(require(root, "solver"), "solver"));
  cfg.schedule = parse_schedule(require(root, "schedule"));
  cfg.seed = get_count(require(root, "seed"), "seed");
  cfg.n_chains = get_count(require(root, "n_chains"), "n_chains");
  const json& t = require(root, "T");
  if (!t.is_number()) throw ConfigError("key 'T' must be a number");
  cfg.horizon = t.get<double>();
  cfg.output_dir = get_as<std::string>(require(root, "output_dir"), "output_dir");
  if (auto it = root.find("emit"); it != root.end()) {
    if (!it->is_array()) throw ConfigError("emit must be an array of strings");
    cfg.emit.clear();
    for (const auto& e : *it) cfg.emit.insert(parse_emit_kind(get_as<std::string>(e, "emit")));
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

std::string run_config_to_json(const RunConfig& config, int indent) {
  json schedule{{"kind", std::string(to_string(config.schedule.kind))}};
  if (config.schedule.n_steps) schedule["n_steps"] = *config.schedule.n_steps;
  if (config.schedule.kind == StepScheduleKind::kDvs) {
    schedule["controller"] = controller_to_json(config.schedule.controller);
  }
  json emit = json::array();
  for (auto e : config.emit) emit.push_back(std::string(to_string(e)));
  json root{{"problem", config.problem},
            {"solver", std::string(to_string(config.solver))},
            {"schedule", schedule},
            {"seed", config.seed},
            {"n_chains", config.n_chains},
            {"T", config.horizon},
            {"output_dir", config.output_dir.string()},
            {"emit", emit}};
  return root.dump(indent);
}

}  // namespace dvs
