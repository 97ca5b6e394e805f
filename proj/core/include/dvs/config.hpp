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

#ifndef DVS_CONFIG_HPP
#define DVS_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>

#include "dvs/integrators.hpp"
#include "dvs/sampler.hpp"

namespace dvs {

enum class EmitKind { kTrajectory, kSummary, kArcProfile, kGammaSweep, kScalingProbe };

std::string_view to_string(EmitKind kind) noexcept;
EmitKind parse_emit_kind(std::string_view name);

/// One experiment. The JSON form uses exactly these field names, with the
/// horizon spelled "T"; unknown keys are rejected at every level.
///
///   {
///     "problem": "coupled_graph", "solver": "euler",
///     "schedule": {"kind": "dvs", "controller": {"kappa_ref": 1.0, "gamma": 0.2}},
///     "seed": 7, "n_chains": 100, "T": 1.0,
///     "output_dir": "out", "emit": ["summary", "trajectory"]
///   }
///
/// Controller keys: alpha, beta, kappa_ref, gamma, dt_base, dt_min, dt_max,
/// active_ranges ([[lo, hi], ...]), eps_num, eps_bound; all optional.
/// "emit" is optional and defaults to ["summary"].
struct RunConfig {
  std::string problem;
  SolverKind solver = SolverKind::kEuler;
  ScheduleSpec schedule;
  std::uint64_t seed = 0;
  std::uint64_t n_chains = 1;
  double horizon = 1.0;
  std::filesystem::path output_dir;
  std::set<EmitKind> emit = {EmitKind::kSummary};

  /// Registry lookup, horizon agreement and schedule invariants.
  void validate() const;
};

/// Throws ConfigError with the offending key on malformed input.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical JSON echo (sorted keys, round-trippable).
std::string run_config_to_json(const RunConfig& config, int indent = 2);

}  // namespace dvs

#endif  // DVS_CONFIG_HPP
