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

#ifndef DVS_INTEGRATORS_HPP
#define DVS_INTEGRATORS_HPP

#include <cstdint>
#include <string_view>

#include "dvs/drift_field.hpp"
#include "dvs/state.hpp"

namespace dvs {

enum class SolverKind { kEuler, kHeun };

std::string_view to_string(SolverKind kind) noexcept;
SolverKind parse_solver_kind(std::string_view name);

/// Drift evaluations per component per step.
constexpr int evals_per_step(SolverKind kind) noexcept {
  return kind == SolverKind::kHeun ? 2 : 1;
}

/// Euler-Maruyama update state + drift dt + g sqrt(dt) noise.
///
/// `step` only labels a NumericOverflowError when the result is not finite.
SystemState euler_step(const SystemState& state, const SystemState& drift,
                       double g, double dt, const SystemState& noise,
                       std::int64_t step = 0);

struct HeunResult {
  SystemState state;
  SystemState first_drift;
};

/// Stochastic Heun step. Evaluates f at (state, t), predicts with Euler,
/// evaluates f at (prediction, t + dt) and applies the averaged drift.
/// The predictor and the corrector share one noise draw. Exactly two drift
/// evaluations per component.
HeunResult heun_step(const SystemState& state, DriftField& field, double g,
                     double dt, double t, const SystemState& noise,
                     std::int64_t step = 0);

/// Heun step whose first drift was already evaluated at (state, t), e.g.
/// by an adaptive controller that needed it to choose dt. One evaluation.
SystemState heun_step_from(const SystemState& state,
                           const SystemState& first_drift, DriftField& field,
                           double g, double dt, double t,
                           const SystemState& noise, std::int64_t step = 0);

}  // namespace dvs

#endif  // DVS_INTEGRATORS_HPP
