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

#include "dvs/sampler.hpp"

#include <cmath>
#include <string>

#include "dvs/errors.hpp"

namespace dvs {

std::string_view to_string(StepScheduleKind kind) noexcept {
  switch (kind) {
    case StepScheduleKind::kFixed:
      return "fixed";
    case StepScheduleKind::kQuadratic:
      return "quadratic";
    case StepScheduleKind::kDvs:
      return "dvs";
  }
  return "unknown";
}

StepScheduleKind parse_step_schedule_kind(std::string_view name) {
  if (name == "fixed") return StepScheduleKind::kFixed;
  if (name == "quadratic") return StepScheduleKind::kQuadratic;
  if (name == "dvs") return StepScheduleKind::kDvs;
  throw ConfigError("unknown schedule kind '" + std::string(name) + "'");
}

void ScheduleSpec::validate(double horizon) const {
  if (kind == StepScheduleKind::kDvs) {
    if (n_steps) {
      throw ConfigError("the dvs schedule chooses its own step count; drop n_steps");
    }
    controller.validate(horizon);
    return;
  }
  if (!n_steps || *n_steps < 1) {
    throw ConfigError(std::string(to_string(kind)) + " schedule needs n_steps >= 1");
  }
}

std::vector<double> fixed_grid(double horizon, std::int64_t n) {
  if (n < 1) throw ConfigError("fixed_grid: n must be at least 1");
  std::vector<double> grid(static_cast<std::size_t>(n) + 1);
  for (std::int64_t k = 0; k < n; ++k) {
    grid[static_cast<std::size_t>(k)] = horizon * static_cast<double>(k) / static_cast<double>(n);
  }
  grid.back() = horizon;
  return grid;
}

std::vector<double> quadratic_grid(double horizon, std::int64_t n) {
  if (n < 1) throw ConfigError("quadratic_grid: n must be at least 1");
  std::vector<double> grid(static_cast<std::size_t>(n) + 1);
  for (std::int64_t k = 0; k <= n; ++k) {
    const double r = static_cast<double>(n - k) / static_cast<double>(n);
    grid[static_cast<std::size_t>(k)] = horizon * (1.0 - r * r);
  }
  return grid;
}

namespace {

struct Scores {
  double v_x = 0.0;
  double v_a = 0.0;
  double ds2_drift = 0.0;
};

Scores instrument(const SystemState& drift, const SystemState& prev, double g,
                  double dt, double eps_num) {
  Scores s;
  s.v_x = drift_variation_score(drift.node, prev.node, g, eps_num);
  if (drift.edge) s.v_a = drift_variation_score(*drift.edge, *prev.edge, g, eps_num);
  Vector df(drift.total_dim());
  df.head(drift.node_dim()) = drift.node - prev.node;
  if (drift.edge) df.tail(drift.edge_dim()) = *drift.edge - *prev.edge;
  s.ds2_drift = drift_line_element(df, g, dt);
  return s;
}

}  // namespace

SamplerResult run_sampler(const ToyProblem& problem, const ScheduleSpec& spec,
                          SolverKind solver, RandomStream stream) {
  const double horizon = problem.horizon;
  spec.validate(horizon);
  if (!problem.field || !problem.init_sampler || !problem.noise_sampler) {
    throw ConfigError("toy problem '" + problem.name + "' is incomplete");
  }

  const bool adaptive = spec.kind == StepScheduleKind::kDvs;
  const ControllerConfig& cfg = spec.controller;
  std::vector<double> grid;
  if (spec.kind == StepScheduleKind::kFixed) grid = fixed_grid(horizon, *spec.n_steps);
  if (spec.kind == StepScheduleKind::kQuadratic) grid = quadratic_grid(horizon, *spec.n_steps);
  const std::int64_t max_steps =
      adaptive ? static_cast<std::int64_t>(std::ceil(horizon / cfg.dt_min)) + 64
               : *spec.n_steps;

  DriftField field = problem.field;
  field.reset_count();

  SamplerResult result;
  SystemState state = problem.init_sampler(stream);
  result.components = state.components();
  const std::ptrdiff_t dim = state.total_dim();
  if (adaptive) {
    result.records.reserve(static_cast<std::size_t>(horizon / cfg.dt_max) + 16);
  } else {
    result.records.reserve(static_cast<std::size_t>(max_steps));
  }

  ControllerState ctrl;
  std::optional<SystemState> prev_drift;
  double prev_g = 0.0;
  double t = 0.0;
  std::int64_t k = 1;

  while (adaptive ? t < horizon - cfg.eps_bound : k <= max_steps) {
    if (k > max_steps) {
      throw RunawayLoopError("adaptive sampler exceeded " + std::to_string(max_steps) +
                             " steps at t = " + std::to_string(t));
    }
    if (!adaptive) t = grid[static_cast<std::size_t>(k - 1)];

    SystemState drift = field.eval(state, t);
    const double g = problem.schedule.g(t);

    TrajectoryRecord rec;
    rec.k = k;
    rec.t = t;
    double dt;
    if (adaptive) {
      ControllerStep step = controller_step(std::move(ctrl), cfg, drift, g, t, horizon);
      dt = step.dt;
      ctrl = std::move(step.state);
      rec.vbar_x = ctrl.vbar_x;
      rec.vbar_a = ctrl.vbar_a;
      rec.horizon_clamped = step.diagnostics.horizon_clamped;
    } else {
      dt = grid[static_cast<std::size_t>(k)] - t;
    }
    rec.dt = dt;

    if (prev_drift) {
      const Scores s = instrument(drift, *prev_drift, g, dt, cfg.eps_num);
      rec.v_x = s.v_x;
      rec.v_a = s.v_a;
      rec.ds2_drift = s.ds2_drift;
      rec.ds2_noise = noise_line_element(g - prev_g, g, dim);
    }

    const SystemState noise = problem.noise_sampler(stream, state);
    if (solver == SolverKind::kEuler) {
      state = euler_step(state, drift, g, dt, noise, k);
    } else {
      state = heun_step_from(state, drift, field, g, dt, t, noise, k);
    }

    rec.nfe_cum = field.eval_count();
    rec.state_norm = state.norm();
    result.records.push_back(rec);

    if (adaptive) {
      t = rec.horizon_clamped ? horizon : t + dt;
    } else {
      t = grid[static_cast<std::size_t>(k)];
    }
    prev_drift = std::move(drift);
    prev_g = g;
    ++k;
  }

  result.final_state = std::move(state);
  result.nfe = field.eval_count();
  return result;
}

std::vector<LineElementSample> line_elements(std::span<const TrajectoryRecord> records) {
  std::vector<LineElementSample> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (r.k < 2) continue;
    out.push_back({r.t, r.ds2_drift, r.ds2_noise, r.dt});
  }
  return out;
}

}  // namespace dvs
