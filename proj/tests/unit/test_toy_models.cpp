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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dvs/errors.hpp"
#include "dvs/metrics.hpp"
#include "dvs/sampler.hpp"
#include "dvs/toy_models.hpp"

namespace dvs {
namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<SamplerResult> run_many(const ToyProblem& p, const ScheduleSpec& spec,
                                    std::uint64_t seed, int chains) {
  std::vector<SamplerResult> out;
  out.reserve(chains);
  for (int i = 0; i < chains; ++i) {
    out.push_back(run_sampler(p, spec, SolverKind::kEuler, RandomStream(seed, i)));
  }
  return out;
}

EmpiricalMoments terminal_node_moments(const std::vector<SamplerResult>& runs) {
  std::vector<Vector> finals;
  for (const auto& r : runs) finals.push_back(r.final_state.node);
  return empirical_moments(finals);
}

TEST(BridgeDrift, Examples) {
  const Vector target = Vector::Constant(3, 1.5);
  EXPECT_EQ(bridge_drift(target, 0.4, target, 1.0), Vector::Zero(3));
  EXPECT_DOUBLE_EQ(bridge_drift(Vector::Zero(1), 0.5, Vector::Ones(1), 1.0)(0), 2.0);
}

TEST(BridgeDrift, SingularNearThePin) {
  EXPECT_THROW(bridge_drift(Vector::Zero(1), 1.0, Vector::Ones(1), 1.0), SingularityError);
  EXPECT_THROW(bridge_drift(Vector::Zero(1), 1.0 - 1e-7, Vector::Ones(1), 1.0),
               SingularityError);
  EXPECT_NO_THROW(bridge_drift(Vector::Zero(1), 1.0 - 1e-5, Vector::Ones(1), 1.0));
}

// RK4 integration of m' = -s m / (pin - t), v' = -2 s v / (pin - t) + g^2.
TEST(BridgeTerminalLaw, MatchesMomentOdeIntegration) {
  for (double s : {0.5, 1.0, 2.0, 3.0}) {
    const double g = 0.8, horizon = 1.0, pin = 1.001, m0 = -0.7, v0 = 1.3;
    auto rhs = [&](double t, double m, double v, double& dm, double& dv) {
      dm = -s * m / (pin - t);
      dv = -2.0 * s * v / (pin - t) + g * g;
    };
    double m = m0, v = v0;
    const int n = 200000;
    const double h = horizon / n;
    for (int k = 0; k < n; ++k) {
      const double t = k * h;
      double a1, b1, a2, b2, a3, b3, a4, b4;
      rhs(t, m, v, a1, b1);
      rhs(t + h / 2, m + h / 2 * a1, v + h / 2 * b1, a2, b2);
      rhs(t + h / 2, m + h / 2 * a2, v + h / 2 * b2, a3, b3);
      rhs(t + h, m + h * a3, v + h * b3, a4, b4);
      m += h / 6 * (a1 + 2 * a2 + 2 * a3 + a4);
      v += h / 6 * (b1 + 2 * b2 + 2 * b3 + b4);
    }
    const Vector target = Vector::Constant(1, 0.25);
    const TerminalLaw law =
        bridge_terminal_law(target, s, g, horizon, pin, Vector::Constant(1, 0.25 + m0), v0);
    EXPECT_NEAR(law.mean(0) - 0.25, m, 1e-8) << "stiffness " << s;
    EXPECT_NEAR(law.var(0), v, 1e-8 * std::max(1.0, v)) << "stiffness " << s;
  }
}

TEST(BridgeProblem, TerminalStatesPinToTarget) {
  const ToyProblem p = make_toy_problem("bridge");
  const double dt_min = 2e-4;
  const auto runs = run_many(p, ScheduleSpec::fixed(static_cast<std::int64_t>(1.0 / dt_min)),
                             31, 1000);
  const Vector target = p.analytic_terminal->mean;
  double ss = 0.0;
  std::size_t n = 0;
  for (const auto& r : runs) {
    ss += (r.final_state.node - target).squaredNorm();
    n += static_cast<std::size_t>(target.size());
  }
  const double rms = std::sqrt(ss / static_cast<double>(n));
  EXPECT_LT(rms, 3.0 * p.schedule.g(1.0) * std::sqrt(dt_min));
}

TEST(BridgeProblem, TerminalMeanMatchesTargetWithinThreeStandardErrors) {
  const ToyProblem p = make_toy_problem("bridge");
  const auto runs = run_many(p, ScheduleSpec::fixed(2000), 32, 2000);
  const EmpiricalMoments m = terminal_node_moments(runs);
  for (Eigen::Index d = 0; d < m.mean.size(); ++d) {
    const double se = std::sqrt(m.var(d) / 2000.0);
    EXPECT_NEAR(m.mean(d), p.analytic_terminal->mean(d), 3.0 * se);
  }
}

TEST(VpDrift, ScoreVanishesAtMarginalMean) {
  const Vector mu = Vector::LinSpaced(3, -1.0, 2.0);
  for (double t : {0.0, 0.4, 0.9}) {
    const VpMarginal m = vp_marginal(t, mu, 0.25, 2.0, 1.0);
    const Vector f = vp_gaussian_drift(m.mean, t, mu, 0.25, 2.0, 1.0);
    const Vector expected = 0.5 * 2.0 * m.mean;
    EXPECT_TRUE(f.isApprox(expected, 1e-14)) << "t=" << t;
  }
}

TEST(VpDrift, ScoreTermMatchesFiniteDifferenceOfLogDensity) {
  const Vector mu = Vector::LinSpaced(2, 0.5, -1.5);
  const double beta0 = 2.0, var = 0.25, h = 1e-5;
  for (double t : {0.0, 0.25, 0.5, 0.75, 0.99}) {
    const VpMarginal m = vp_marginal(t, mu, var, beta0, 1.0);
    auto log_density = [&](const Vector& x) {
      return -0.5 * (x - m.mean).squaredNorm() / m.var;
    };
    for (double shift : {-1.0, 0.3, 2.0}) {
      const Vector x = m.mean + Vector::Constant(2, shift);
      const Vector score = (vp_gaussian_drift(x, t, mu, var, beta0, 1.0) - 0.5 * beta0 * x) /
                           beta0;
      for (Eigen::Index i = 0; i < 2; ++i) {
        Vector xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        const double fd = (log_density(xp) - log_density(xm)) / (2 * h);
        EXPECT_NEAR(score(i), fd, 1e-6 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST(VpProblem, TerminalMomentsMatchDataLaw) {
  const ToyProblem p = make_toy_problem("vp_gaussian");
  const int chains = 10000;
  const auto runs = run_many(p, ScheduleSpec::fixed(1000), 41, chains);
  const EmpiricalMoments m = terminal_node_moments(runs);
  const TerminalLaw& law = *p.analytic_terminal;
  for (Eigen::Index d = 0; d < m.mean.size(); ++d) {
    const double se_mean = std::sqrt(law.var(d) / chains);
    const double se_var = law.var(d) * std::sqrt(2.0 / chains);
    EXPECT_NEAR(m.mean(d), law.mean(d), 3.0 * se_mean) << "dim " << d;
    EXPECT_NEAR(m.var(d), law.var(d), 3.0 * se_var) << "dim " << d;
  }
}

TEST(VpProblem, InitialLawIsTheExactMarginal) {
  const ToyProblem p = make_toy_problem("vp_gaussian");
  std::vector<Vector> draws;
  for (int i = 0; i < 20000; ++i) {
    RandomStream s(43, i);
    draws.push_back(p.init_sampler(s).node);
  }
  const EmpiricalMoments m = empirical_moments(draws);
  const VpMarginal exact = vp_marginal(0.0, p.analytic_terminal->mean, 0.25, 2.0, 1.0);
  for (Eigen::Index d = 0; d < m.mean.size(); ++d) {
    EXPECT_NEAR(m.mean(d), exact.mean(d), 3.0 * std::sqrt(exact.var / 20000));
    EXPECT_NEAR(m.var(d), exact.var, 3.0 * exact.var * std::sqrt(2.0 / 20000));
  }
}

TEST(AnalyticTerminals, FineFixedStepsConverge) {
  for (const auto& name : toy_problem_names()) {
    const ToyProblem p = make_toy_problem(name);
    if (!p.analytic_terminal) continue;
    const int chains = 1000;
    const auto runs = run_many(p, ScheduleSpec::fixed(10000), 51, chains);
    const EmpiricalMoments m = terminal_node_moments(runs);
    const TerminalLaw& law = *p.analytic_terminal;
    for (Eigen::Index d = 0; d < m.mean.size(); ++d) {
      const double se_mean = std::sqrt(law.var(d) / chains);
      const double se_var = law.var(d) * std::sqrt(2.0 / chains);
      EXPECT_NEAR(m.mean(d), law.mean(d), 3.0 * se_mean) << name << " dim " << d;
      EXPECT_NEAR(m.var(d), law.var(d), 3.0 * se_var) << name << " dim " << d;
    }
  }
}

TEST(CoupledGraph, EqualStiffnessGivesEqualComponentSteps) {
  CoupledGraphParams params = default_coupled_graph_params();
  params.n_nodes = 1;
  params.stiffness_x = params.stiffness_a = 1.5;
  params.sharpen_c = 0.0;
  params.target_x = Vector::Constant(1, 0.0);
  params.target_a = Eigen::MatrixXd::Zero(1, 1);

  ControllerConfig cfg;
  ControllerState ctrl;
  SystemState x(Vector::Constant(1, 0.8), Vector::Constant(1, 0.8));
  RandomStream stream(61, 0);
  double t = 0.0;
  int checked = 0;
  while (t < 1.0 - cfg.eps_bound) {
    const SystemState f = coupled_graph_drift(x, t, params);
    ControllerStep r = controller_step(std::move(ctrl), cfg, f, 1.0, t, 1.0);
    if (r.diagnostics.adapted) {
      EXPECT_NEAR(r.diagnostics.dt_x, r.diagnostics.dt_a, 1e-12 * r.diagnostics.dt_x);
      ++checked;
    }
    ctrl = std::move(r.state);
    const double z = gaussian_draw(stream, 1)(0);
    SystemState noise(Vector::Constant(1, z), Vector::Constant(1, z));
    x = euler_step(x, f, 1.0, r.dt, noise);
    t = r.diagnostics.horizon_clamped ? 1.0 : t + r.dt;
  }
  EXPECT_GT(checked, 10);
}

TEST(CoupledGraph, SharpeningMakesEdgesTheLateBottleneck) {
  const ToyProblem p = make_toy_problem("coupled_graph");
  const auto runs = run_many(p, ScheduleSpec::dvs(ControllerConfig{}), 62, 50);
  double va = 0.0, vx = 0.0;
  for (const auto& r : runs) {
    for (const auto& rec : r.records) {
      if (rec.t <= 0.8 || rec.k < 2) continue;
      va += rec.v_a;
      vx += rec.v_x;
    }
  }
  ASSERT_GT(vx, 0.0);
  EXPECT_GT(va / vx, 1.0);
}

TEST(CoupledGraph, ThresholdedEdgesReproduceTarget) {
  const ToyProblem p = make_toy_problem("coupled_graph");
  const auto runs = run_many(p, ScheduleSpec::fixed(5000), 63, 200);
  const Eigen::MatrixXd& target = *p.target_adjacency;
  double match = 0.0, total = 0.0;
  for (const auto& r : runs) {
    const Eigen::MatrixXd a = threshold_adjacency(unflatten_adjacency(*r.final_state.edge));
    match += (a.array() == target.array()).cast<double>().sum();
    total += static_cast<double>(a.size());
  }
  EXPECT_GE(match / total, 0.95);
}

TEST(CoupledGraph, EdgePartStaysSymmetric) {
  const ToyProblem p = make_toy_problem("coupled_graph");
  const SamplerResult r = run_sampler(p, ScheduleSpec::dvs(ControllerConfig{}),
                                      SolverKind::kEuler, RandomStream(64, 0));
  const Eigen::MatrixXd a = unflatten_adjacency(*r.final_state.edge);
  EXPECT_EQ(a, a.transpose());
  const SamplerResult h = run_sampler(p, ScheduleSpec::fixed(300), SolverKind::kHeun,
                                      RandomStream(64, 1));
  const Eigen::MatrixXd b = unflatten_adjacency(*h.final_state.edge);
  EXPECT_EQ(b, b.transpose());
}

TEST(CoupledGraph, MissingEdgePartIsStructural) {
  const CoupledGraphParams params = default_coupled_graph_params();
  EXPECT_THROW(coupled_graph_drift(SystemState(Vector::Zero(params.n_nodes)), 0.1, params),
               StructuralError);
}

TEST(CoupledGraph, DefaultTargetIsASymmetricAdjacency) {
  const CoupledGraphParams params = default_coupled_graph_params();
  const Eigen::MatrixXd& a = params.target_a;
  EXPECT_EQ(a, a.transpose());
  EXPECT_EQ(a.diagonal(), Vector::Zero(a.rows()));
  EXPECT_TRUE(((a.array() == 0.0) || (a.array() == 1.0)).all());
}

TEST(Noise, SymmetricEdgeNoiseStructure) {
  const SystemState like(Vector::Zero(3), Vector::Zero(16));
  RandomStream s(70, 0);
  const SystemState n = symmetric_edge_noise(s, like);
  const Eigen::MatrixXd m = unflatten_adjacency(*n.edge);
  EXPECT_EQ(m, m.transpose());
  EXPECT_EQ(m.diagonal(), Vector::Zero(4));
  EXPECT_NE(m(0, 1), 0.0);
  EXPECT_EQ(n.node_dim(), 3);
}

TEST(Noise, IidNoiseMatchesShape) {
  const SystemState like(Vector::Zero(2), Vector::Zero(5));
  RandomStream s(71, 0);
  EXPECT_TRUE(iid_noise(s, like).same_shape(like));
}

TEST(Registry, NamesResolveAndUnknownIsConfigError) {
  for (const auto& name : toy_problem_names()) {
    const ToyProblem p = make_toy_problem(name);
    EXPECT_EQ(p.name, name);
    EXPECT_TRUE(static_cast<bool>(p.field));
    EXPECT_GT(p.horizon, 0.0);
  }
  EXPECT_THROW(make_toy_problem("qm9"), ConfigError);
}

TEST(Registry, BuildersRejectBadParameters) {
  BridgeParams b;
  b.stiffness = -1.0;
  EXPECT_THROW(make_bridge_problem(b), ConfigError);
  VpParams v;
  v.data_mean = Vector::Zero(2);
  v.data_var = 0.0;
  EXPECT_THROW(make_vp_problem(v), ConfigError);
}

TEST(TimeDrift, IsStateIndependent) {
  ToyProblem p = make_toy_problem("time_drift");
  const SystemState a(Vector::Zero(4));
  const SystemState b(Vector::Constant(4, 3.0));
  EXPECT_EQ(p.field.eval(a, 0.3).node, p.field.eval(b, 0.3).node);
  EXPECT_NEAR(p.field.eval(a, 0.25).node(0), std::sin(2 * kPi * 0.25), 1e-15);
}

}  // namespace
}  // namespace dvs
