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

#include "dvs/controller.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "dvs/errors.hpp"

namespace dvs {
namespace {

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

}  // namespace

void ControllerConfig::validate(double horizon) const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (!positive_finite(beta)) throw ConfigError("beta must be positive");
  if (!positive_finite(kappa_ref)) throw ConfigError("kappa_ref must be positive");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw ConfigError("gamma must be nonnegative");
  }
  if (!positive_finite(dt_base) || !positive_finite(dt_min) ||
      !positive_finite(dt_max)) {
    throw ConfigError("dt_base, dt_min and dt_max must be positive");
  }
  if (!(dt_min <= dt_base && dt_base <= dt_max)) {
    throw ConfigError("require dt_min <= dt_base <= dt_max");
  }
  if (!positive_finite(eps_num)) throw ConfigError("eps_num must be positive");
  if (!positive_finite(eps_bound)) throw ConfigError("eps_bound must be positive");

  std::vector<TimeRange> sorted = active_ranges;
  std::sort(sorted.begin(), sorted.end(),
            [](const TimeRange& a, const TimeRange& b) { return a.lo < b.lo; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const TimeRange& r = sorted[i];
    if (!(r.lo <= r.hi) || r.lo < 0.0 || r.hi > horizon) {
      throw ConfigError("active range [" + std::to_string(r.lo) + ", " +
                        std::to_string(r.hi) + "] is not within [0, T]");
    }
    if (i > 0 && r.lo <= sorted[i - 1].hi) {
      throw ConfigError("active ranges must be pairwise disjoint");
    }
  }
}

bool ControllerConfig::is_active(double t) const noexcept {
  if (active_ranges.empty()) return true;
  return std::any_of(active_ranges.begin(), active_ranges.end(),
                     [t](const TimeRange& r) { return r.contains(t); });
}

double drift_variation_score(const Vector& f_curr, const Vector& f_prev,
                             double g, double eps_num) {
  if (f_curr.size() != f_prev.size()) {
    throw StructuralError("drift_variation_score: shape mismatch (" +
                          std::to_string(f_curr.size()) + " vs " +
                          std::to_string(f_prev.size()) + ")");
  }
  return (f_curr - f_prev).squaredNorm() / std::max(g * g, eps_num);
}

double ema_update(double vbar, double v, double alpha) noexcept {
  return (1.0 - alpha) * vbar + alpha * v;
}

double unclipped_step_size(double vbar, const ControllerConfig& cfg) noexcept {
  return cfg.dt_base * std::pow(cfg.kappa_ref / std::max(vbar, cfg.eps_num), cfg.beta);
}

double adaptive_step_size(double vbar, const ControllerConfig& cfg) noexcept {
  return std::min(std::max(unclipped_step_size(vbar, cfg), cfg.dt_min), cfg.dt_max);
}

double bottleneck(double dt_x, std::optional<double> dt_a) noexcept {
  return dt_a ? std::min(dt_x, *dt_a) : dt_x;
}

std::pair<double, double> aggregate(double vbar_x, double vbar_a, double gamma,
                                    bool single_component) noexcept {
  const double v = gamma * (vbar_x + vbar_a);
  return {v, single_component ? 0.0 : v};
}

ControllerStep controller_step(ControllerState ctrl, const ControllerConfig& cfg,
                               const Vector& f_x, const Vector* f_a, double g,
                               double t, double horizon) {
  if (!(t < horizon - cfg.eps_bound)) {
    throw ContractViolation("controller_step called at t = " + std::to_string(t) +
                            ", at or past the horizon " + std::to_string(horizon));
  }
  const bool single = f_a == nullptr;

  ControllerStep out;
  StepDiagnostics& diag = out.diagnostics;
  double dt = cfg.dt_base;

  if (ctrl.step_index > 1 && cfg.is_active(t)) {
    if (!ctrl.prev_drift_x || ctrl.prev_drift_a.has_value() == single) {
      throw StructuralError("controller_step: drift components changed between steps");
    }
    diag.v_x = drift_variation_score(f_x, *ctrl.prev_drift_x, g, cfg.eps_num);
    diag.v_a = single ? 0.0
                      : drift_variation_score(*f_a, *ctrl.prev_drift_a, g, cfg.eps_num);

    ctrl.vbar_x = ema_update(ctrl.vbar_x, diag.v_x, cfg.alpha);
    ctrl.vbar_a = single ? 0.0 : ema_update(ctrl.vbar_a, diag.v_a, cfg.alpha);

    diag.dt_x = adaptive_step_size(ctrl.vbar_x, cfg);
    diag.dt_a = single ? diag.dt_x : adaptive_step_size(ctrl.vbar_a, cfg);
    dt = bottleneck(diag.dt_x, single ? std::nullopt : std::optional<double>(diag.dt_a));

    std::tie(ctrl.vbar_x, ctrl.vbar_a) =
        aggregate(ctrl.vbar_x, ctrl.vbar_a, cfg.gamma, single);
    diag.adapted = true;
  } else {
    diag.dt_x = dt;
    diag.dt_a = dt;
  }

  const double remaining = horizon - t;
  if (remaining < dt) {
    dt = remaining;
    diag.horizon_clamped = true;
  }

  ctrl.prev_drift_x = f_x;
  if (single) {
    ctrl.prev_drift_a.reset();
  } else {
    ctrl.prev_drift_a = *f_a;
  }
  ++ctrl.step_index;

  out.dt = dt;
  out.state = std::move(ctrl);
  return out;
}

}  // namespace dvs
