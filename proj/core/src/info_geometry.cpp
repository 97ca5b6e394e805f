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

#include "dvs/info_geometry.hpp"

#include <algorithm>
#include <cmath>

#include "dvs/errors.hpp"
#include "dvs/integrators.hpp"

namespace dvs {

double drift_line_element(const Vector& df, double g, double dt) {
  return dt / (g * g) * df.squaredNorm();
}

double noise_line_element(double dg, double g, std::ptrdiff_t dim) {
  return 2.0 * static_cast<double>(dim) / (g * g) * dg * dg;
}

Eigen::MatrixXd fim_closed_form(double g, double dt, int dim) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim + 1, dim + 1);
  m.topLeftCorner(dim, dim).diagonal().setConstant(dt / (g * g));
  m(dim, dim) = 2.0 * dim / (g * g);
  return m;
}

FimEstimate fim_monte_carlo_oracle(double g, double dt, int dim,
                                   std::size_t n_samples, RandomStream stream,
                                   std::size_t shards) {
  if (dim < 1 || n_samples == 0) {
    throw StructuralError("fim_monte_carlo_oracle: need dim >= 1 and samples >= 1");
  }
  if (!(g > 0.0) || !(dt > 0.0)) {
    throw ConfigError("fim_monte_carlo_oracle: g and dt must be positive");
  }
  shards = std::clamp<std::size_t>(shards, 1, n_samples);
  const int p = dim + 1;
  const double sd = g * std::sqrt(dt);

  // Sums of s s^T and of (s s^T)^2 entry-wise, per shard, reduced in order.
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(p, p);
  Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(p, p);
  Vector z(dim);
  Vector score(p);
  for (std::size_t s = 0; s < shards; ++s) {
    RandomStream shard = stream.substream(s);
    const std::size_t begin = n_samples * s / shards;
    const std::size_t end = n_samples * (s + 1) / shards;
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(p, p);
    Eigen::MatrixXd local_sq = Eigen::MatrixXd::Zero(p, p);
    for (std::size_t i = begin; i < end; ++i) {
      shard.fill_normals(z.data(), static_cast<std::size_t>(dim));
      const Vector r = sd * z;
      score.head(dim) = r / (g * g);
      score(dim) = r.squaredNorm() / (g * g * g * dt) - dim / g;
      const Eigen::MatrixXd outer = score * score.transpose();
      local += outer;
      local_sq += outer.cwiseProduct(outer);
    }
    sum += local;
    sum_sq += local_sq;
  }

  const double n = static_cast<double>(n_samples);
  FimEstimate est;
  est.samples = n_samples;
  est.mean = sum / n;
  const Eigen::MatrixXd var = (sum_sq / n - est.mean.cwiseProduct(est.mean)).cwiseMax(0.0);
  est.std_error = (var / n).cwiseSqrt();
  return est;
}

std::vector<ScalingPoint> scaling_ratio_probe(DriftField& field,
                                              const NoiseSchedule& schedule,
                                              const SystemState& state, double t,
                                              std::span<const double> dt_grid,
                                              std::size_t n_reps,
                                              RandomStream& stream) {
  if (schedule.g_dot(t) == 0.0) {
    throw DegenerateProbeError("scaling probe: g is stationary at the probe time");
  }
  if (n_reps == 0) throw StructuralError("scaling probe: n_reps must be positive");

  const SystemState f0 = field.eval(state, t);
  const double g0 = schedule.g(t);
  std::vector<ScalingPoint> out;
  out.reserve(dt_grid.size());
  for (const double dt : dt_grid) {
    const double dg = schedule.g(t + dt) - g0;
    if (dg == 0.0) {
      throw DegenerateProbeError("scaling probe: g(t + dt) equals g(t)");
    }
    double acc = 0.0;
    for (std::size_t rep = 0; rep < n_reps; ++rep) {
      SystemState noise = SystemState::zeros_like(state);
      stream.fill_normals(noise.node.data(), static_cast<std::size_t>(noise.node.size()));
      if (noise.edge) {
        stream.fill_normals(noise.edge->data(), static_cast<std::size_t>(noise.edge->size()));
      }
      const SystemState next = euler_step(state, f0, g0, dt, noise);
      const SystemState f1 = field.eval(next, t + dt);
      double df2 = (f1.node - f0.node).squaredNorm();
      if (f1.edge) df2 += (*f1.edge - *f0.edge).squaredNorm();
      acc += std::sqrt(df2) / std::abs(dg);
    }
    out.push_back({dt, acc / static_cast<double>(n_reps)});
  }
  return out;
}

double fit_loglog_slope(std::span<const ScalingPoint> points) {
  if (points.size() < 2) throw StructuralError("slope fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : points) {
    const double x = std::log(p.dt);
    const double y = std::log(p.mean_ratio);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(points.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ArcProfile arc_length_profile(std::span<const LineElementSample> samples,
                              double truncate_fraction) {
  if (samples.empty()) throw StructuralError("arc_length_profile: empty input");
  if (truncate_fraction < 0.0 || truncate_fraction >= 1.0) {
    throw ConfigError("arc_length_profile: truncate_fraction must lie in [0, 1)");
  }
  const auto keep = std::max<std::size_t>(
      1, samples.size() - static_cast<std::size_t>(
                              std::floor(truncate_fraction * static_cast<double>(samples.size()))));
  samples = samples.first(keep);

  ArcProfile prof;
  double sum = 0.0;
  double arc = 0.0;
  prof.cumulative_arc_length.reserve(samples.size());
  for (const auto& s : samples) {
    sum += s.ds2_drift;
    prof.total_ds2 += s.ds2_drift + s.ds2_noise;
    arc += std::sqrt(s.ds2_drift + s.ds2_noise);
    prof.cumulative_arc_length.push_back(arc);
  }
  const double n = static_cast<double>(samples.size());
  prof.mean = sum / n;
  double ss = 0.0;
  for (const auto& s : samples) ss += (s.ds2_drift - prof.mean) * (s.ds2_drift - prof.mean);
  prof.std = std::sqrt(ss / n);
  prof.cv = prof.mean > 0.0 ? prof.std / prof.mean : 0.0;
  return prof;
}

}  // namespace dvs
