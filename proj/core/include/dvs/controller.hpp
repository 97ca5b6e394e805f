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

#ifndef DVS_CONTROLLER_HPP
#define DVS_CONTROLLER_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dvs/state.hpp"

namespace dvs {

/// Closed time interval [lo, hi].
struct TimeRange {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double t) const noexcept { return lo <= t && t <= hi; }
  friend bool operator==(const TimeRange&, const TimeRange&) = default;
};

/// Hyperparameters of the drift-variation step-size controller. Defaults are
/// the common settings (alpha 0.2, beta 0.5, base/min/max steps 1e-3, 2e-4,
/// 5e-3, eps_num 1e-12, eps_bound 1e-6).
struct ControllerConfig {
  double alpha = 0.2;
  double beta = 0.5;
  double kappa_ref = 1.0;
  double gamma = 0.2;
  double dt_base = 1e-3;
  double dt_min = 2e-4;
  double dt_max = 5e-3;
  /// Where the controller adapts. Empty means the whole horizon.
  std::vector<TimeRange> active_ranges;
  double eps_num = 1e-12;
  double eps_bound = 1e-6;

  /// Throws ConfigError unless every invariant holds on [0, horizon].
  void validate(double horizon) const;

  bool is_active(double t) const noexcept;
};

/// Running memory of one trajectory's controller.
struct ControllerState {
  double vbar_x = 0.0;
  double vbar_a = 0.0;
  std::optional<Vector> prev_drift_x;
  std::optional<Vector> prev_drift_a;
  std::int64_t step_index = 1;
};

struct StepDiagnostics {
  double v_x = 0.0;
  double v_a = 0.0;
  double dt_x = 0.0;
  double dt_a = 0.0;
  /// True when the adaptive branch ran (k > 1 and t inside an active range).
  bool adapted = false;
  /// True when the horizon clamp shortened the step.
  bool horizon_clamped = false;
};

struct ControllerStep {
  double dt = 0.0;
  ControllerState state;
  StepDiagnostics diagnostics;
};

/// ||f_curr - f_prev||^2 / max(g^2, eps_num).
double drift_variation_score(const Vector& f_curr, const Vector& f_prev,
                             double g, double eps_num = 1e-12);

/// (1 - alpha) vbar + alpha v.
double ema_update(double vbar, double v, double alpha) noexcept;

/// dt_base (kappa_ref / max(vbar, eps_num))^beta before clipping.
double unclipped_step_size(double vbar, const ControllerConfig& cfg) noexcept;

/// The power-law step clipped to [dt_min, dt_max].
double adaptive_step_size(double vbar, const ControllerConfig& cfg) noexcept;

/// The limiting component sets the step. Single-component systems pass no
/// edge step.
double bottleneck(double dt_x, std::optional<double> dt_a = std::nullopt) noexcept;

/// Both memories become gamma (vbar_x + vbar_a). With `single_component`
/// the edge slot stays identically zero.
std::pair<double, double> aggregate(double vbar_x, double vbar_a, double gamma,
                                    bool single_component = false) noexcept;

/// One controller decision at time t with the drifts just evaluated there.
///
/// On the first step, or outside every active range, the step is dt_base and
/// the smoothed memories are left untouched. Otherwise both scores are
/// computed against the cached drifts, smoothed, mapped to per-component
/// steps, combined through the bottleneck and then aggregated. The step is
/// always clamped to T - t, the current drifts are cached and k advances.
///
/// Throws ContractViolation when t >= horizon - eps_bound and StructuralError
/// when the drift shapes change between calls.
ControllerStep controller_step(ControllerState ctrl, const ControllerConfig& cfg,
                               const Vector& f_x, const Vector* f_a, double g,
                               double t, double horizon);

inline ControllerStep controller_step(ControllerState ctrl,
                                      const ControllerConfig& cfg,
                                      const SystemState& drift, double g,
                                      double t, double horizon) {
  return controller_step(std::move(ctrl), cfg, drift.node,
                         drift.edge ? &*drift.edge : nullptr, g, t, horizon);
}

}  // namespace dvs

#endif  // DVS_CONTROLLER_HPP
