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

#ifndef DVS_INFO_GEOMETRY_HPP
#define DVS_INFO_GEOMETRY_HPP

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

#include "dvs/drift_field.hpp"
#include "dvs/noise_schedule.hpp"
#include "dvs/random.hpp"
#include "dvs/state.hpp"

namespace dvs {

/// Fisher-Rao line element contributions of one discretization step.
struct LineElementSample {
  double t = 0.0;
  double ds2_drift = 0.0;
  double ds2_noise = 0.0;
  double dt = 0.0;
};

/// Drift contribution (dt / g^2) ||df||^2.
double drift_line_element(const Vector& df, double g, double dt);

/// Noise contribution (2 D / g^2) dg^2.
double noise_line_element(double dg, double g, std::ptrdiff_t dim);

/// Monte-Carlo estimate of the joint Fisher information of the Gaussian
/// transition kernel N(x + f dt, g^2 dt I) in the parameters (f, g).
struct FimEstimate {
  Eigen::MatrixXd mean;        ///< (D+1) x (D+1) averaged score outer product.
  Eigen::MatrixXd std_error;   ///< Entry-wise standard error of `mean`.
  std::size_t samples = 0;
};

/// Draws residuals r ~ N(0, g^2 dt I), forms the joint score
/// [r / g^2, r.r / (g^3 dt) - D / g] and averages its outer product.
/// Work is split into `shards` substreams of `stream` and reduced in shard
/// order, so the result does not depend on how shards are scheduled.
FimEstimate fim_monte_carlo_oracle(double g, double dt, int dim,
                                   std::size_t n_samples, RandomStream stream,
                                   std::size_t shards = 16);

/// Closed forms: I_ff = (dt / g^2) I, I_fg = 0, I_gg = 2 D / g^2.
Eigen::MatrixXd fim_closed_form(double g, double dt, int dim);

struct ScalingPoint {
  double dt = 0.0;
  double mean_ratio = 0.0;
};

/// For each dt, simulates `n_reps` one-step Euler-Maruyama transitions from
/// `state` at time t and averages ||f(x', t + dt) - f(x, t)|| / |g(t + dt) - g(t)|.
/// Throws DegenerateProbeError when g does not move at the probe point.
std::vector<ScalingPoint> scaling_ratio_probe(DriftField& field,
                                              const NoiseSchedule& schedule,
                                              const SystemState& state, double t,
                                              std::span<const double> dt_grid,
                                              std::size_t n_reps,
                                              RandomStream& stream);

/// Least-squares slope of log(mean_ratio) against log(dt).
double fit_loglog_slope(std::span<const ScalingPoint> points);

struct ArcProfile {
  double mean = 0.0;
  double std = 0.0;
  double cv = 0.0;            ///< std / mean, 0 when the mean is 0.
  double total_ds2 = 0.0;     ///< Sum of drift and noise contributions.
  std::vector<double> cumulative_arc_length;  ///< Running sum of sqrt(ds2).
};

/// Statistics of the per-step drift contribution. `truncate_fraction` drops
/// that fraction of the trailing samples first (presentation only).
/// Throws StructuralError on empty input.
ArcProfile arc_length_profile(std::span<const LineElementSample> samples,
                              double truncate_fraction = 0.0);

}  // namespace dvs

#endif  // DVS_INFO_GEOMETRY_HPP
