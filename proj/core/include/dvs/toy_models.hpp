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

#ifndef DVS_TOY_MODELS_HPP
#define DVS_TOY_MODELS_HPP

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dvs/drift_field.hpp"
#include "dvs/noise_schedule.hpp"
#include "dvs/random.hpp"
#include "dvs/state.hpp"

namespace dvs {

// Time runs from prior noise at t = 0 to data at t = T.

/// Diagonal Gaussian law of the node part at t = T.
struct TerminalLaw {
  Vector mean;
  Vector var;
};

using InitSampler = std::function<SystemState(RandomStream&)>;
/// Draws the standard-normal noise for one step, shaped like `like`.
using NoiseSampler = std::function<SystemState(RandomStream&, const SystemState& like)>;

struct ToyProblem {
  std::string name;
  DriftField field;
  NoiseSchedule schedule;
  double horizon = 1.0;
  InitSampler init_sampler;
  NoiseSampler noise_sampler;
  std::optional<TerminalLaw> analytic_terminal;
  /// Pinned adjacency for graph toys (n x n, symmetric, 0/1).
  std::optional<Eigen::MatrixXd> target_adjacency;
};

/// Independent standard normals for every entry of both parts.
SystemState iid_noise(RandomStream& stream, const SystemState& like);

/// Node part i.i.d.; edge part (n x n, row-major) drawn on the strict upper
/// triangle and mirrored, with a zero diagonal.
SystemState symmetric_edge_noise(RandomStream& stream, const SystemState& like);

/// (target - state) / (pin_time - t). Throws SingularityError when
/// pin_time - t < eps_bound.
Vector bridge_drift(const Vector& state, double t, const Vector& target,
                    double pin_time, double eps_bound = 1e-6);

/// Exact reverse drift of the variance-preserving process with constant
/// rate beta0 and data N(data_mean, data_var I):
///   beta0 / 2 x + beta0 (m(t) - x) / s(t),
/// m(t) = data_mean e^{-beta0 (T - t) / 2}, s(t) = data_var e^{-beta0 (T - t)} + 1 - e^{-beta0 (T - t)}.
Vector vp_gaussian_drift(const Vector& state, double t, const Vector& data_mean,
                         double data_var, double beta0, double horizon);

struct VpMarginal {
  Vector mean;
  double var = 0.0;
};

/// Marginal law N(m(t), s(t) I) of the variance-preserving toy at time t.
VpMarginal vp_marginal(double t, const Vector& data_mean, double data_var,
                       double beta0, double horizon);

struct CoupledGraphParams {
  int n_nodes = 6;
  double stiffness_x = 1.0;
  double stiffness_a = 1.0;
  /// Late-time sharpening of the edge drift, factor 1 + c / (T - t + delta).
  double sharpen_c = 0.0;
  double sharpen_delta = 0.01;
  double horizon = 1.0;
  /// Bridges pin at horizon + pin_offset so the drift stays regular on [0, T].
  double pin_offset = 1e-3;
  double eps_bound = 1e-6;
  Vector target_x;            ///< n_nodes entries.
  Eigen::MatrixXd target_a;   ///< n_nodes x n_nodes symmetric 0/1.
};

/// Node part: stiffness_x times the bridge drift toward target_x. Edge part:
/// stiffness_a (1 + c / (T - t + delta)) times the bridge drift toward the
/// flattened target_a. Throws StructuralError when the edge part is absent.
SystemState coupled_graph_drift(const SystemState& state, double t,
                                const CoupledGraphParams& params);

/// Law at `horizon` of dy = -s y / (pin - t) dt + g dW started from
/// N(mean0, var0), with y = x - target; g constant.
TerminalLaw bridge_terminal_law(const Vector& target, double stiffness, double g,
                                double horizon, double pin_time,
                                const Vector& mean0, double var0);

// Concrete problems. Each builder validates its parameters (ConfigError).

struct BridgeParams {
  int dim = 4;
  double stiffness = 2.0;
  double g = 1.0;
  double horizon = 1.0;
  double pin_offset = 1e-3;
  double eps_bound = 1e-6;
  Vector target;   ///< Defaults to ones(dim).
};
ToyProblem make_bridge_problem(const BridgeParams& params);

struct VpParams {
  Vector data_mean;   ///< Dimension of the problem.
  double data_var = 0.25;
  double beta0 = 2.0;
  double horizon = 1.0;
  /// Scales the diffusion coefficient sqrt(beta0); 0 gives the probability
  /// flow with the same drift (used for deterministic reductions).
  double noise_scale = 1.0;
};
/// Starts from the exact t = 0 marginal so the terminal law is the data law.
ToyProblem make_vp_problem(const VpParams& params);

CoupledGraphParams default_coupled_graph_params();
ToyProblem make_coupled_graph_problem(const CoupledGraphParams& params, double g = 1.0);

/// f(x) = -x with a linear schedule g0 -> g1; init N(0, I).
ToyProblem make_linear_ou_problem(int dim = 4, double g0 = 1.0, double g1 = 0.2,
                                  double horizon = 1.0);

/// f = c (state- and time-independent); constant g.
ToyProblem make_constant_drift_problem(const Vector& c, double g = 1.0,
                                       double horizon = 1.0);

/// f(x, t) = sin(2 pi t) (1, ..., 1), independent of the state; linear schedule.
ToyProblem make_time_drift_problem(int dim = 4, double horizon = 1.0);

/// Registered names: bridge, vp_gaussian, vp_stiff, coupled_graph,
/// coupled_graph_symmetric, linear_ou, constant_drift, time_drift.
std::vector<std::string> toy_problem_names();

/// Throws ConfigError for unknown names.
ToyProblem make_toy_problem(std::string_view name);

}  // namespace dvs

#endif  // DVS_TOY_MODELS_HPP
