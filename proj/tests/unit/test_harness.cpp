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
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dvs/config.hpp"
#include "dvs/errors.hpp"
#include "dvs/experiment.hpp"
#include "dvs/random.hpp"
#include "json.hpp"

namespace dvs {
namespace {

namespace fs = std::filesystem;

const char* kBridgeConfig = R"({
  "problem": "bridge", "solver": "euler",
  "schedule": {"kind": "dvs", "controller": {"gamma": 0.2, "kappa_ref": 1.0}},
  "seed": 5, "n_chains": 6, "T": 1.0,
  "output_dir": "unused", "emit": ["summary", "trajectory", "arc_profile"]
})";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("dvs_harness_" + name);
  fs::remove_all(dir);
  return dir;
}

class WorkersEnv {
 public:
  explicit WorkersEnv(const char* value) {
    if (const char* old = std::getenv("DVS_WORKERS")) saved_ = old;
    if (value) {
      setenv("DVS_WORKERS", value, 1);
    } else {
      unsetenv("DVS_WORKERS");
    }
  }
  ~WorkersEnv() {
    if (saved_.empty()) {
      unsetenv("DVS_WORKERS");
    } else {
      setenv("DVS_WORKERS", saved_.c_str(), 1);
    }
  }

 private:
  std::string saved_;
};

TEST(Config, ParsesFullDocument) {
  const RunConfig c = parse_run_config(kBridgeConfig);
  EXPECT_EQ(c.problem, "bridge");
  EXPECT_EQ(c.solver, SolverKind::kEuler);
  EXPECT_EQ(c.schedule.kind, StepScheduleKind::kDvs);
  EXPECT_EQ(c.schedule.controller.gamma, 0.2);
  EXPECT_EQ(c.schedule.controller.alpha, ControllerConfig{}.alpha);
  EXPECT_EQ(c.seed, 5u);
  EXPECT_EQ(c.n_chains, 6u);
  EXPECT_EQ(c.emit.count(EmitKind::kTrajectory), 1u);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, EmitDefaultsToSummary) {
  const RunConfig c = parse_run_config(
      R"({"problem": "bridge", "solver": "heun", "schedule": {"kind": "fixed", "n_steps": 10},
          "seed": 1, "n_chains": 1, "T": 1.0, "output_dir": "o"})");
  EXPECT_EQ(c.emit, std::set<EmitKind>{EmitKind::kSummary});
  EXPECT_EQ(c.schedule.n_steps, 10);
}

TEST(Config, RejectsUnknownKeysAtEveryLevel) {
  auto doc = nlohmann::json::parse(kBridgeConfig);
  auto top = doc;
  top["colour"] = 1;
  EXPECT_THROW(parse_run_config(top.dump()), ConfigError);
  auto sched = doc;
  sched["schedule"]["order"] = 2;
  EXPECT_THROW(parse_run_config(sched.dump()), ConfigError);
  auto ctrl = doc;
  ctrl["schedule"]["controller"]["kappa"] = 1.0;
  try {
    parse_run_config(ctrl.dump());
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("kappa"), std::string::npos);
  }
}

TEST(Config, RejectsMissingAndMistypedKeys) {
  auto doc = nlohmann::json::parse(kBridgeConfig);
  for (const char* key : {"problem", "solver", "schedule", "seed", "n_chains", "T", "output_dir"}) {
    auto d = doc;
    d.erase(key);
    EXPECT_THROW(parse_run_config(d.dump()), ConfigError) << key;
  }
  auto bad = doc;
  bad["n_chains"] = "many";
  EXPECT_THROW(parse_run_config(bad.dump()), ConfigError);
  auto neg = doc;
  neg["seed"] = -3;
  EXPECT_THROW(parse_run_config(neg.dump()), ConfigError);
  EXPECT_THROW(parse_run_config("{not json"), ConfigError);
  EXPECT_THROW(load_run_config("/nonexistent/dvs/config.json"), IoError);
}

TEST(Config, ValidationFailures) {
  RunConfig c = parse_run_config(kBridgeConfig);
  c.horizon = 2.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = parse_run_config(kBridgeConfig);
  c.problem = "swiss_roll";
  EXPECT_THROW(c.validate(), ConfigError);
  c = parse_run_config(kBridgeConfig);
  c.n_chains = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  auto doc = nlohmann::json::parse(kBridgeConfig);
  doc["schedule"]["n_steps"] = 100;
  EXPECT_THROW(parse_run_config(doc.dump()).validate(), ConfigError);
  auto fixed_ctrl = nlohmann::json::parse(kBridgeConfig);
  fixed_ctrl["schedule"] = {{"kind", "fixed"}, {"n_steps", 10}, {"controller", {{"gamma", 0.1}}}};
  EXPECT_THROW(parse_run_config(fixed_ctrl.dump()), ConfigError);
}

TEST(Config, EchoRoundTrips) {
  RunConfig c = parse_run_config(kBridgeConfig);
  c.schedule.controller.active_ranges = {{0.25, 0.75}};
  c.schedule.controller.dt_base = 0.1 * 0.03;
  const std::string echo = run_config_to_json(c);
  const RunConfig back = parse_run_config(echo);
  EXPECT_EQ(run_config_to_json(back), echo);
  EXPECT_EQ(back.schedule.controller.dt_base, c.schedule.controller.dt_base);
  EXPECT_EQ(back.schedule.controller.active_ranges, c.schedule.controller.active_ranges);
}

TEST(Workers, EnvironmentOverride) {
  {
    WorkersEnv env("3");
    EXPECT_EQ(default_worker_count(), 3u);
  }
  for (const char* bad : {"0", "-2", "two", "4x"}) {
    WorkersEnv env(bad);
    EXPECT_THROW(default_worker_count(), ConfigError) << bad;
  }
  WorkersEnv env(nullptr);
  EXPECT_GE(default_worker_count(), 1u);
}

TEST(Formatting, SeventeenSignificantDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Experiment, OutputsAreByteIdenticalAcrossRunsAndWorkerCounts) {
  RunConfig c = parse_run_config(kBridgeConfig);
  const fs::path a = scratch_dir("a");
  const fs::path b = scratch_dir("b");
  {
    WorkersEnv env("1");
    c.output_dir = a;
    run_experiment(c);
  }
  {
    WorkersEnv env("3");
    c.output_dir = b;
    run_experiment(c);
  }
  std::vector<std::string> names{"arc_profile.csv"};
  for (int i = 0; i < 6; ++i) names.push_back("trajectory_" + std::to_string(i) + ".csv");
  for (const auto& n : names) {
    ASSERT_TRUE(fs::exists(a / n)) << n;
    EXPECT_EQ(slurp(a / n), slurp(b / n)) << n;
  }
  auto ja = nlohmann::json::parse(slurp(a / "summary.json"));
  auto jb = nlohmann::json::parse(slurp(b / "summary.json"));
  ja["summary"].erase("wall_time_per_step");
  jb["summary"].erase("wall_time_per_step");
  ja["config"].erase("output_dir");
  jb["config"].erase("output_dir");
  EXPECT_EQ(ja, jb);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Experiment, FilesFollowTheDocumentedFormat) {
  RunConfig c = parse_run_config(kBridgeConfig);
  c.output_dir = scratch_dir("format");
  const SummaryReport r = run_experiment(c);

  std::ifstream traj(c.output_dir / "trajectory_0.csv");
  std::string header, first;
  std::getline(traj, header);
  std::getline(traj, first);
  EXPECT_EQ(header, "k,t,dt,v_x,v_a,vbar_x,vbar_a,ds2_drift,ds2_noise,nfe_cum,state_norm");
  EXPECT_EQ(first.rfind("1,0,", 0), 0u) << first;
  EXPECT_NE(first.find("0.001"), std::string::npos);

  const auto j = nlohmann::json::parse(slurp(c.output_dir / "summary.json"));
  EXPECT_EQ(j["rng"].get<std::string>(), std::string(kRngIdentifier));
  const auto& s = j["summary"];
  EXPECT_EQ(s["total_nfe"].get<std::uint64_t>(),
            s["total_steps"].get<std::uint64_t>() * s["evals_per_step"].get<std::uint64_t>() *
                s["components"].get<std::uint64_t>());
  EXPECT_EQ(s["total_nfe"].get<std::uint64_t>(), r.total_nfe);
  EXPECT_TRUE(s["terminal_error_w2"].is_number());
  EXPECT_TRUE(s["mmd_degree"].is_null());
  EXPECT_EQ(j["config"]["problem"], "bridge");

  std::ifstream arc(c.output_dir / "arc_profile.csv");
  std::getline(arc, header);
  EXPECT_EQ(header, "chain,steps,mean_ds2_drift,std_ds2_drift,cv,total_ds2");
  fs::remove_all(c.output_dir);
}

TEST(Experiment, GraphSummaryReportsMmd) {
  RunConfig c = parse_run_config(kBridgeConfig);
  c.problem = "coupled_graph";
  c.n_chains = 4;
  c.emit = {};
  const SummaryReport r = run_experiment(c);
  ASSERT_TRUE(r.mmd_degree.has_value());
  EXPECT_GE(*r.mmd_degree, 0.0);
  EXPECT_GT(*r.bandwidth_spectral, 0.0);
  EXPECT_EQ(r.components, 2);
}

TEST(Experiment, GammaSweepIsMonotoneInCost) {
  RunConfig c = parse_run_config(kBridgeConfig);
  c.problem = "coupled_graph";
  c.n_chains = 20;
  c.output_dir = scratch_dir("sweep");
  c.emit = {EmitKind::kGammaSweep};
  const std::vector<double> gammas{0.10, 0.20, 0.35};
  const auto rows = run_gamma_sweep(c, gammas);
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GE(rows[i].summary.total_steps, rows[i - 1].summary.total_steps);
  }
  std::ifstream csv(c.output_dir / "gamma_sweep.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "gamma,total_steps,total_nfe,mean_steps,terminal_error_w2,arc_cv");
  fs::remove_all(c.output_dir);
}

TEST(Experiment, AdaptiveArcProfileIsFlatterThanFixed) {
  RunConfig c = parse_run_config(kBridgeConfig);
  c.emit = {};
  const SummaryReport dvs = run_experiment(c);
  c.schedule = ScheduleSpec::fixed(static_cast<std::int64_t>(std::lround(dvs.mean_steps)));
  const SummaryReport fixed = run_experiment(c);
  EXPECT_LT(dvs.arc_cv, fixed.arc_cv);
}

TEST(Experiment, ScalingProbeWritesSlope) {
  RunConfig c = parse_run_config(kBridgeConfig);
  c.problem = "linear_ou";
  c.output_dir = scratch_dir("probe");
  c.emit = {EmitKind::kScalingProbe};
  const ScalingProbeResult r = run_scaling_probe(c);
  EXPECT_EQ(r.t, 0.5);
  EXPECT_NEAR(r.slope, -0.5, 0.1);
  EXPECT_TRUE(fs::exists(c.output_dir / "scaling_probe.csv"));
  fs::remove_all(c.output_dir);
}

TEST(Chains, FailureNamesLowestChainAndStep) {
  ToyProblem p = make_toy_problem("linear_ou");
  const DriftField inner = p.field;
  p.field = DriftField([inner](const SystemState& s, double t) {
    DriftField f = inner;
    SystemState out = f.eval(s, t);
    if (t > 0.5 && s.node(0) > 0.5) out.node(0) = std::numeric_limits<double>::infinity();
    return out;
  });
  const ScheduleSpec spec = ScheduleSpec::fixed(20);
  // Serial oracle: the first chain whose own run overflows.
  std::int64_t expect_chain = -1;
  std::int64_t expect_step = -1;
  for (std::uint64_t i = 0; i < 16 && expect_chain < 0; ++i) {
    try {
      run_sampler(p, spec, SolverKind::kEuler, RandomStream(9, i));
    } catch (const NumericOverflowError& e) {
      expect_chain = static_cast<std::int64_t>(i);
      expect_step = e.step();
    }
  }
  ASSERT_GE(expect_chain, 0) << "no chain overflowed; adjust the trigger";
  for (unsigned workers : {1u, 4u}) {
    try {
      run_chains(p, spec, SolverKind::kEuler, 9, 16, workers);
      FAIL() << "expected ChainError";
    } catch (const ChainError& e) {
      EXPECT_EQ(static_cast<std::int64_t>(e.chain()), expect_chain);
      const std::string msg = e.what();
      EXPECT_NE(msg.find("step " + std::to_string(expect_step)), std::string::npos) << msg;
    }
  }
}

TEST(Chains, OrderIndependentOfWorkers) {
  const ToyProblem p = make_toy_problem("vp_gaussian");
  const auto a = run_chains(p, ScheduleSpec::dvs({}), SolverKind::kHeun, 3, 7, 1);
  const auto b = run_chains(p, ScheduleSpec::dvs({}), SolverKind::kHeun, 3, 7, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].final_state.node, b[i].final_state.node);
    EXPECT_EQ(a[i].nfe, b[i].nfe);
  }
}

TEST(Files, AtomicWriteReportsPath) {
  const fs::path dir = scratch_dir("atomic");
  fs::create_directories(dir);
  const fs::path blocker = dir / "plain_file";
  std::ofstream(blocker) << "x";
  const fs::path target = blocker / "out.csv";
  try {
    write_file_atomic(target, "x");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find(blocker.string()), std::string::npos) << e.what();
  }
  write_file_atomic(dir / "ok.csv", "a,b\n");
  EXPECT_EQ(slurp(dir / "ok.csv"), "a,b\n");
  EXPECT_FALSE(fs::exists(dir / "ok.csv.tmp"));
  fs::remove_all(dir);
}

}  // namespace
}  // namespace dvs
