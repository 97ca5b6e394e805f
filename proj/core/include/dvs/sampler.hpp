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

#ifndef DVS_SAMPLER_HPP
#define DVS_SAMPLER_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dvs/controller.hpp"
#include "dvs/info_geometry.hpp"
#include "dvs/integrators.hpp"
#include "dvs/random.hpp"
#include "dvs/state.hpp"
#include "dvs/toy_models.hpp"

namespace dvs {

enum class StepScheduleKind { kFixed, kQuadratic, kDvs };

std::string_view to_string(StepScheduleKind kind) noexcept;
StepScheduleKind parse_step_schedule_kind(std::string_view name);

/// How time steps are chosen. Fixed and quadratic grids take a step count;
/// the adaptive schedule takes a controller and must not be given one.
struct ScheduleSpec {
  StepScheduleKind kind = StepScheduleKind::kDvs;
  std::optional<std::int64_t> n_steps;
  ControllerConfig controller;

  void validate(double horizon) const;

  static ScheduleSpec fixed(std::int64_t n) { return {StepScheduleKind::kFixed, n, {}}; }
  static ScheduleSpec quadratic(std::int64_t n) {
    return {StepScheduleKind::kQuadratic, n, {}};
  }
  static ScheduleSpec dvs(ControllerConfig cfg) {
    return {StepScheduleKind::kDvs, std::nullopt, std::move(cfg)};
  }
};

/// t_k = k T / n for k = 0..n; the last point is exactly T.
std::vector<double> fixed_grid(double horizon, std::int64_t n);

/// t_k = T (1 - ((n - k) / n)^2): steps shrink toward t = T.
std::vector<double> quadratic_grid(double horizon, std::int64_t n);

/// One integration step. `t` is the start of the step, where the drift was
/// evaluated and the scores were computed. Scores and line elements are 0 on
/// the first step (no previous drift); smoothed memories are 0 for grids.
struct TrajectoryRecord {
  std::int64_t k = 0;
  double t = 0.0;
  double dt = 0.0;
  double v_x = 0.0;
  double v_a = 0.0;
  double vbar_x = 0.0;
  double vbar_a = 0.0;
  double ds2_drift = 0.0;
  double ds2_noise = 0.0;
  std::uint64_t nfe_cum = 0;
  double state_norm = 0.0;
  bool horizon_clamped = false;
};

struct SamplerResult {
  SystemState final_state;
  std::vector<TrajectoryRecord> records;
  std::uint64_t nfe = 0;
  int components = 1;
};

/// Integrates `problem` from t = 0 to T with the given step schedule and
/// solver, drawing the initial state and all noise from `stream`.
///
/// The drift evaluated at the start of each step serves both the controller
/// and the update (Euler), or is the first of the two Heun evaluations. The
/// returned NFE equals the instrumented drift-field count.
///
/// Throws NumericOverflowError (with the step index) on a non-finite state
/// and RunawayLoopError when the adaptive loop exceeds ceil(T / dt_min) + 64
/// steps.
SamplerResult run_sampler(const ToyProblem& problem, const ScheduleSpec& spec,
                          SolverKind solver, RandomStream stream);

/// Line-element samples of steps k >= 2 (the first step has no predecessor).
std::vector<LineElementSample> line_elements(std::span<const TrajectoryRecord> records);

}  // namespace dvs

#endif  // DVS_SAMPLER_HPP
