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

#include "dvs/toy_models.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <string>

#include "dvs/errors.hpp"

namespace dvs {
namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw ConfigError(std::string(what) + " must be positive");
  }
}

Vector flatten(const Eigen::MatrixXd& m) {
  // Row-major flattening of an n x n matrix.
  Vector v(m.size());
  const Eigen::Index n = m.cols();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < n; ++j) v(i * n + j) = m(i, j);
  }
  return v;
}

Vector default_target(int dim) {
  static const double kPattern[] = {1.0, -1.0, 0.5, 2.0};
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = kPattern[i % 4];
  return v;
}

SystemState iid_normal_state(RandomStream& stream, Eigen::Index dim) {
  SystemState s{Vector(dim)};
  stream.fill_normals(s.node.data(), static_cast<std::size_t>(dim));
  return s;
}

}  // namespace

SystemState iid_noise(RandomStream& stream, const SystemState& like) {
  SystemState out = SystemState::zeros_like(like);
  stream.fill_normals(out.node.data(), static_cast<std::size_t>(out.node.size()));
  if (out.edge) {
    stream.fill_normals(out.edge->data(), static_cast<std::size_t>(out.edge->size()));
  }
  return out;
}

SystemState symmetric_edge_noise(RandomStream& stream, const SystemState& like) {
  SystemState out = SystemState::zeros_like(like);
  stream.fill_normals(out.node.data(), static_cast<std::size_t>(out.node.size()));
  if (!out.edge) return out;

  const auto n = static_cast<Eigen::Index>(std::lround(std::sqrt(static_cast<double>(out.edge->size()))));
  if (n * n != out.edge->size()) {
    throw StructuralError("symmetric_edge_noise: edge part is not square");
  }
  const auto upper = static_cast<std::size_t>(n * (n - 1) / 2);
  if (upper == 0) return out;
  Vector draws(static_cast<Eigen::Index>(upper));
  stream.fill_normals(draws.data(), upper);
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      (*out.edge)(i * n + j) = draws(idx);
      (*out.edge)(j * n + i) = draws(idx);
      ++idx;
    }
  }
  return out;
}

Vector bridge_drift(const Vector& state, double t, const Vector& target,
                    double pin_time, double eps_bound) {
  if (state.size() != target.size()) {
    throw StructuralError("bridge_drift: state and target sizes differ");
  }
  const double remaining = pin_time - t;
  if (remaining < eps_bound) {
    throw SingularityError("bridge_drift evaluated within eps_bound of the pin time (t = " +
                           std::to_string(t) + ")");
  }
  return (target - state) / remaining;
}

VpMarginal vp_marginal(double t, const Vector& data_mean, double data_var,
                       double beta0, double horizon) {
  const double tau = horizon - t;
  const double decay = std::exp(-beta0 * tau);
  return {data_mean * std::exp(-0.5 * beta0 * tau), data_var * decay + (1.0 - decay)};
}

Vector vp_gaussian_drift(const Vector& state, double t, const Vector& data_mean,
                         double data_var, double beta0, double horizon) {
  if (state.size() != data_mean.size()) {
    throw StructuralError("vp_gaussian_drift: state and data_mean sizes differ");
  }
  const VpMarginal m = vp_marginal(t, data_mean, data_var, beta0, horizon);
  assert(m.var > 0.0);
  return 0.5 * beta0 * state + beta0 * (m.mean - state) / m.var;
}

SystemState coupled_graph_drift(const SystemState& state, double t,
                                const CoupledGraphParams& p) {
  if (!state.edge) throw StructuralError("coupled_graph_drift: edge part missing");
  const double pin = p.horizon + p.pin_offset;
  SystemState out(p.stiffness_x * bridge_drift(state.node, t, p.target_x, pin, p.eps_bound));
  const double sharpen = 1.0 + p.sharpen_c / (p.horizon - t + p.sharpen_delta);
  out.edge = p.stiffness_a * sharpen *
             bridge_drift(*state.edge, t, flatten(p.target_a), pin, p.eps_bound);
  return out;
}

TerminalLaw bridge_terminal_law(const Vector& target, double stiffness, double g,
                                double horizon, double pin_time,
                                const Vector& mean0, double var0) {
  const double tau0 = pin_time;
  const double tau_t = pin_time - horizon;
  const double rho = std::pow(tau_t / tau0, stiffness);
  double q;
  if (std::abs(2.0 * stiffness - 1.0) < 1e-12) {
    q = tau_t * std::log(tau0 / tau_t);
  } else {
    q = (tau_t - std::pow(tau_t, 2.0 * stiffness) * std::pow(tau0, 1.0 - 2.0 * stiffness)) /
        (2.0 * stiffness - 1.0);
  }
  TerminalLaw law;
  law.mean = target + (mean0 - target) * rho;
  law.var = Vector::Constant(target.size(), var0 * rho * rho + g * g * q);
  return law;
}

ToyProblem make_bridge_problem(const BridgeParams& params) {
  if (params.dim < 1) throw ConfigError("bridge: dim must be at least 1");
  require_positive(params.stiffness, "bridge stiffness");
  require_positive(params.horizon, "bridge horizon");
  require_positive(params.pin_offset, "bridge pin_offset");
  const Vector target = params.target.size() ? params.target : default_target(params.dim);
  if (target.size() != params.dim) throw ConfigError("bridge: target size differs from dim");

  const double pin = params.horizon + params.pin_offset;
  const double s = params.stiffness;
  const double eps = params.eps_bound;

  ToyProblem p;
  p.name = "bridge";
  p.horizon = params.horizon;
  p.schedule = make_schedule(ScheduleKind::kConstant, params.horizon, params.g);
  p.field = DriftField([target, pin, s, eps](const SystemState& x, double t) {
    return SystemState(s * bridge_drift(x.node, t, target, pin, eps));
  });
  const int dim = params.dim;
  p.init_sampler = [dim](RandomStream& rs) { return iid_normal_state(rs, dim); };
  p.noise_sampler = iid_noise;
  p.analytic_terminal = bridge_terminal_law(target, s, params.g, params.horizon, pin,
                                            Vector::Zero(dim), 1.0);
  return p;
}

ToyProblem make_vp_problem(const VpParams& params) {
  if (params.data_mean.size() < 1) throw ConfigError("vp: data_mean must be nonempty");
  require_positive(params.data_var, "vp data_var");
  require_positive(params.beta0, "vp beta0");
  require_positive(params.horizon, "vp horizon");
  if (params.noise_scale < 0.0) throw ConfigError("vp noise_scale must be nonnegative");

  const Vector mean = params.data_mean;
  const double var = params.data_var;
  const double beta0 = params.beta0;
  const double horizon = params.horizon;

  ToyProblem p;
  p.name = "vp_gaussian";
  p.horizon = horizon;
  p.schedule = make_schedule(ScheduleKind::kConstant, horizon, std::sqrt(beta0));
  p.field = DriftField([mean, var, beta0, horizon](const SystemState& x, double t) {
    return SystemState(vp_gaussian_drift(x.node, t, mean, var, beta0, horizon));
  });
  const VpMarginal prior = vp_marginal(0.0, mean, var, beta0, horizon);
  p.init_sampler = [prior](RandomStream& rs) {
    SystemState s = iid_normal_state(rs, prior.mean.size());
    s.node = prior.mean + std::sqrt(prior.var) * s.node;
    return s;
  };
  if (params.noise_scale == 0.0) {
    p.noise_sampler = [](RandomStream&, const SystemState& like) {
      return SystemState::zeros_like(like);
    };
  } else if (params.noise_scale == 1.0) {
    p.noise_sampler = iid_noise;
  } else {
    const double scale = params.noise_scale;
    p.noise_sampler = [scale](RandomStream& rs, const SystemState& like) {
      SystemState n = iid_noise(rs, like);
      n.node *= scale;
      return n;
    };
  }
  if (params.noise_scale == 1.0) {
    p.analytic_terminal = TerminalLaw{mean, Vector::Constant(mean.size(), var)};
  }
  return p;
}

CoupledGraphParams default_coupled_graph_params() {
  CoupledGraphParams p;
  p.n_nodes = 6;
  p.stiffness_x = 1.0;
  p.stiffness_a = 2.0;
  p.sharpen_c = 0.05;
  p.sharpen_delta = 0.01;
  p.target_x = Vector::LinSpaced(p.n_nodes, -1.0, 1.0);
  // 6-cycle with one chord.
  p.target_a = Eigen::MatrixXd::Zero(p.n_nodes, p.n_nodes);
  for (int i = 0; i < p.n_nodes; ++i) {
    const int j = (i + 1) % p.n_nodes;
    p.target_a(i, j) = p.target_a(j, i) = 1.0;
  }
  p.target_a(0, 3) = p.target_a(3, 0) = 1.0;
  return p;
}

ToyProblem make_coupled_graph_problem(const CoupledGraphParams& params, double g) {
  const int n = params.n_nodes;
  if (n < 2) throw ConfigError("coupled_graph: need at least two nodes");
  require_positive(params.stiffness_x, "coupled_graph stiffness_x");
  require_positive(params.stiffness_a, "coupled_graph stiffness_a");
  require_positive(params.sharpen_delta, "coupled_graph sharpen_delta");
  require_positive(params.pin_offset, "coupled_graph pin_offset");
  if (params.sharpen_c < 0.0) throw ConfigError("coupled_graph sharpen_c must be nonnegative");
  if (params.target_x.size() != n || params.target_a.rows() != n ||
      params.target_a.cols() != n) {
    throw ConfigError("coupled_graph: target sizes do not match n_nodes");
  }
  if (!params.target_a.isApprox(params.target_a.transpose(), 0.0)) {
    throw ConfigError("coupled_graph: target adjacency must be symmetric");
  }

  ToyProblem p;
  p.name = "coupled_graph";
  p.horizon = params.horizon;
  p.schedule = make_schedule(ScheduleKind::kConstant, params.horizon, g);
  p.field = DriftField([params](const SystemState& x, double t) {
    return coupled_graph_drift(x, t, params);
  });
  p.init_sampler = [n](RandomStream& rs) {
    SystemState like(Vector::Zero(n), Vector::Zero(n * n));
    return symmetric_edge_noise(rs, like);
  };
  p.noise_sampler = symmetric_edge_noise;
  p.analytic_terminal =
      bridge_terminal_law(params.target_x, params.stiffness_x, g, params.horizon,
                          params.horizon + params.pin_offset, Vector::Zero(n), 1.0);
  p.target_adjacency = params.target_a;
  return p;
}

ToyProblem make_linear_ou_problem(int dim, double g0, double g1, double horizon) {
  if (dim < 1) throw ConfigError("linear_ou: dim must be at least 1");
  ToyProblem p;
  p.name = "linear_ou";
  p.horizon = horizon;
  p.schedule = make_schedule(ScheduleKind::kLinear, horizon, g0, g1);
  p.field = DriftField([](const SystemState& x, double) { return SystemState(-x.node); });
  p.init_sampler = [dim](RandomStream& rs) { return iid_normal_state(rs, dim); };
  p.noise_sampler = iid_noise;
  return p;
}

ToyProblem make_constant_drift_problem(const Vector& c, double g, double horizon) {
  if (c.size() < 1) throw ConfigError("constant_drift: c must be nonempty");
  ToyProblem p;
  p.name = "constant_drift";
  p.horizon = horizon;
  p.schedule = make_schedule(ScheduleKind::kConstant, horizon, g);
  p.field = DriftField([c](const SystemState&, double) { return SystemState(c); });
  const auto dim = c.size();
  p.init_sampler = [dim](RandomStream& rs) { return iid_normal_state(rs, dim); };
  p.noise_sampler = iid_noise;
  return p;
}

ToyProblem make_time_drift_problem(int dim, double horizon) {
  if (dim < 1) throw ConfigError("time_drift: dim must be at least 1");
  ToyProblem p;
  p.name = "time_drift";
  p.horizon = horizon;
  p.schedule = make_schedule(ScheduleKind::kLinear, horizon, 1.0, 0.2);
  p.field = DriftField([dim](const SystemState&, double t) {
    return SystemState(Vector::Constant(dim, std::sin(2.0 * std::numbers::pi * t)));
  });
  p.init_sampler = [dim](RandomStream& rs) { return iid_normal_state(rs, dim); };
  p.noise_sampler = iid_noise;
  return p;
}

std::vector<std::string> toy_problem_names() {
  return {"bridge",        "vp_gaussian",   "vp_stiff",       "coupled_graph",
          "coupled_graph_symmetric", "linear_ou", "constant_drift", "time_drift"};
}

ToyProblem make_toy_problem(std::string_view name) {
  ToyProblem p;
  if (name == "bridge") {
    p = make_bridge_problem(BridgeParams{});
  } else if (name == "vp_gaussian" || name == "vp_stiff") {
    VpParams vp;
    vp.data_mean = default_target(4);
    vp.data_var = name == "vp_stiff" ? 0.01 : 0.25;
    p = make_vp_problem(vp);
  } else if (name == "coupled_graph") {
    p = make_coupled_graph_problem(default_coupled_graph_params());
  } else if (name == "coupled_graph_symmetric") {
    CoupledGraphParams cg = default_coupled_graph_params();
    cg.stiffness_a = cg.stiffness_x;
    cg.sharpen_c = 0.0;
    p = make_coupled_graph_problem(cg);
  } else if (name == "linear_ou") {
    p = make_linear_ou_problem();
  } else if (name == "constant_drift") {
    p = make_constant_drift_problem(Vector::Constant(2, 1.0));
  } else if (name == "time_drift") {
    p = make_time_drift_problem();
  } else {
    throw ConfigError("unknown toy problem '" + std::string(name) + "'");
  }
  p.name = std::string(name);
  return p;
}

}  // namespace dvs
