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

#ifndef DVS_EXPERIMENT_HPP
#define DVS_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dvs/config.hpp"
#include "dvs/info_geometry.hpp"
#include "dvs/sampler.hpp"
#include "dvs/toy_models.hpp"

namespace dvs {

/// DVS_WORKERS when set to a positive integer, else the hardware concurrency.
unsigned default_worker_count();

/// Runs chains 0..n-1 on up to `workers` threads. Chain i draws from
/// RandomStream(seed, i); results come back in chain order. A failing chain
/// is rethrown as ChainError naming the lowest failing chain id.
std::vector<SamplerResult> run_chains(const ToyProblem& problem, const ScheduleSpec& spec,
                                      SolverKind solver, std::uint64_t seed,
                                      std::uint64_t n_chains, unsigned workers = 0);

struct SummaryReport {
  std::uint64_t n_chains = 0;
  std::uint64_t total_steps = 0;
  std::uint64_t total_nfe = 0;
  double mean_steps = 0.0;
  int evals_per_step = 1;
  int components = 1;
  std::optional<double> terminal_error_w2;
  std::optional<double> mmd_degree;
  std::optional<double> mmd_spectral;
  std::optional<double> bandwidth_degree;
  std::optional<double> bandwidth_spectral;
  double arc_cv = 0.0;   ///< Per-chain CV of ds2_drift, averaged over chains.
  double wall_time_per_step = 0.0;
};

SummaryReport summarize(const ToyProblem& problem, SolverKind solver,
                        std::span<const SamplerResult> chains, double wall_seconds);

/// Mean per-chain CV of ds2_drift over steps k >= 2. Chains with a single
/// step contribute nothing.
double mean_arc_cv(std::span<const SamplerResult> chains);

/// Runs the configured experiment and writes every requested file under
/// config.output_dir. The summary table goes to `log` when non-null.
SummaryReport run_experiment(const RunConfig& config, std::ostream* log = nullptr);

struct SweepRow {
  double value = 0.0;
  SummaryReport summary;
};

/// One experiment per aggregation factor; other settings unchanged. With
/// emit containing gamma_sweep, writes gamma_sweep.csv.
std::vector<SweepRow> run_gamma_sweep(const RunConfig& config, std::span<const double> gammas,
                                      std::ostream* log = nullptr);

inline constexpr double kProbeDtGrid[] = {1e-2, 1e-3, 1e-4, 1e-5};
inline constexpr std::size_t kProbeReps = 10000;

struct ScalingProbeResult {
  double t = 0.0;
  std::vector<ScalingPoint> points;
  double slope = 0.0;
};

/// Drift/noise variation probe at t = T/2 from the problem's initial draw.
ScalingProbeResult run_scaling_probe(const RunConfig& config,
                                     std::span<const double> dt_grid = kProbeDtGrid,
                                     std::size_t n_reps = kProbeReps,
                                     std::ostream* log = nullptr);

/// Writes `contents` to a sibling temporary and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Fixed 17-significant-digit text used by every emitted file.
std::string format_double(double value);

std::string trajectory_csv(std::span<const TrajectoryRecord> records);
std::string summary_json(const RunConfig& config, const SummaryReport& report);

}  // namespace dvs

#endif  // DVS_EXPERIMENT_HPP
