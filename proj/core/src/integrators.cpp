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

#include "dvs/integrators.hpp"

#include <cmath>
#include <string>

#include "dvs/errors.hpp"

namespace dvs {

std::string_view to_string(SolverKind kind) noexcept {
  return kind == SolverKind::kHeun ? "heun" : "euler";
}

SolverKind parse_solver_kind(std::string_view name) {
  if (name == "euler") return SolverKind::kEuler;
  if (name == "heun") return SolverKind::kHeun;
  throw ConfigError("unknown solver '" + std::string(name) + "'");
}

namespace {

void check_step_args(const SystemState& state, const SystemState& drift,
                     const SystemState& noise, double dt) {
  require_same_shape(state, drift, "integrator drift");
  require_same_shape(state, noise, "integrator noise");
  if (!(dt > 0.0)) throw ContractViolation("integrator: dt must be positive");
}

SystemState apply_update(const SystemState& state, const SystemState& drift,
                         double g, double dt, const SystemState& noise,
                         std::int64_t step) {
  const double diffusion = g * std::sqrt(dt);
  SystemState out(state.node + dt * drift.node + diffusion * noise.node);
  if (state.edge) out.edge = *state.edge + dt * *drift.edge + diffusion * *noise.edge;
  if (!out.all_finite()) {
    throw NumericOverflowError("non-finite state after update", step);
  }
  return out;
}

SystemState average(const SystemState& a, const SystemState& b) {
  SystemState out(0.5 * (a.node + b.node));
  if (a.edge) out.edge = 0.5 * (*a.edge + *b.edge);
  return out;
}

}  // namespace

SystemState euler_step(const SystemState& state, const SystemState& drift,
                       double g, double dt, const SystemState& noise,
                       std::int64_t step) {
  check_step_args(state, drift, noise, dt);
  return apply_update(state, drift, g, dt, noise, step);
}

HeunResult heun_step(const SystemState& state, DriftField& field, double g,
                     double dt, double t, const SystemState& noise,
                     std::int64_t step) {
  SystemState first = field.eval(state, t);
  SystemState next = heun_step_from(state, first, field, g, dt, t, noise, step);
  return {std::move(next), std::move(first)};
}

SystemState heun_step_from(const SystemState& state,
                           const SystemState& first_drift, DriftField& field,
                           double g, double dt, double t,
                           const SystemState& noise, std::int64_t step) {
  check_step_args(state, first_drift, noise, dt);
  const SystemState predicted = apply_update(state, first_drift, g, dt, noise, step);
  const SystemState second = field.eval(predicted, t + dt);
  return apply_update(state, average(first_drift, second), g, dt, noise, step);
}

}  // namespace dvs
