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

#include "dvs/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "dvs/errors.hpp"
#include "dvs/metrics.hpp"
#include "json.hpp"

namespace dvs {

using nlohmann::ordered_json;

unsigned default_worker_count() {
  if (const char* env = std::getenv("DVS_WORKERS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != nullptr && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    throw ConfigError(std::string("DVS_WORKERS must be a positive integer, got '") + env + "'");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<SamplerResult> run_chains(const ToyProblem& problem, const ScheduleSpec& spec,
                                      SolverKind solver, std::uint64_t seed,
                                      std::uint64_t n_chains, unsigned workers) {
  if (n_chains < 1) throw ConfigError("n_chains must be at least 1");
  if (workers == 0) workers = default_worker_count();
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_chains));

  std::vector<SamplerResult> results(n_chains);
  std::vector<std::exception_ptr> errors(n_chains);
  std::atomic<std::uint64_t> next{0};

  auto worker = [&] {
    for (std::uint64_t i = next++; i < n_chains; i = next++) {
      try {
        results[i] = run_sampler(problem, spec, solver, RandomStream(seed, i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (std::uint64_t i = 0; i < n_chains; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const NumericOverflowError& e) {
      throw ChainError("aborted at step " + std::to_string(e.step()) + ": " + e.what(), i);
    } catch (const std::exception& e) {
      throw ChainError(std::string("aborted: ") + e.what(), i);
    }
  }
  return results;
}

double mean_arc_cv(std::span<const SamplerResult> chains) {
  double sum = 0.0;
  std::size_t used = 0;
  for (const auto& c : chains) {
    const auto samples = line_elements(c.records);
    if (samples.empty()) continue;
    sum += arc_length_profile(samples).cv;
    ++used;
  }
  return used == 0 ? 0.0 : sum / static_cast<double>(used);
}

SummaryReport summarize(const ToyProblem& problem, SolverKind solver,
                        std::span<const SamplerResult> chains, double wall_seconds) {
  if (chains.empty()) throw StructuralError("summarize: no chains");
  SummaryReport rep;
  rep.n_chains = chains.size();
  rep.evals_per_step = evals_per_step(solver);
  rep.components = chains.front().components;
  for (const auto& c : chains) {
    rep.total_steps += c.records.size();
    rep.total_nfe += c.nfe;
  }
  rep.mean_steps = static_cast<double>(rep.total_steps) / static_cast<double>(rep.n_chains);
  rep.arc_cv = mean_arc_cv(chains);
  rep.wall_time_per_step =
      rep.total_steps > 0 ? wall_seconds / static_cast<double>(rep.total_steps) : 0.0;

  if (problem.analytic_terminal) {
    std::vector<Vector> finals;
    finals.reserve(chains.size());
    for (const auto& c : chains) finals.push_back(c.final_state.node);
    const EmpiricalMoments m = empirical_moments(finals);
    const TerminalLaw& law = *problem.analytic_terminal;
    Vector var = m.var.cwiseMax(0.0);
    rep.terminal_error_w2 = std::sqrt((m.mean - law.mean).squaredNorm() +
                                      (var.cwiseSqrt() - law.var.cwiseSqrt()).squaredNorm());
  }

  if (problem.target_adjacency) {
    std::vector<Eigen::MatrixXd> generated;
    generated.reserve(chains.size());
    for (const auto& c : chains) {
      if (!c.final_state.edge) throw StructuralError("graph toy produced no edge part");
      Eigen::MatrixXd w = unflatten_adjacency(*c.final_state.edge);
      generated.push_back(threshold_adjacency(0.5 * (w + w.transpose())));
    }
    const std::vector<Eigen::MatrixXd> reference{*problem.target_adjacency};
    const GraphMmd g = graph_summary_mmd(generated, reference);
    rep.mmd_degree = g.mmd_degree;
    rep.mmd_spectral = g.mmd_spectral;
    rep.bandwidth_degree = g.bandwidth_degree;
    rep.bandwidth_spectral = g.bandwidth_spectral;
  }
  return rep;
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " +
                          ec.message());
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                        ec.message());
}

std::string trajectory_csv(std::span<const TrajectoryRecord> records) {
  std::string out = "k,t,dt,v_x,v_a,vbar_x,vbar_a,ds2_drift,ds2_noise,nfe_cum,state_norm\n";
  out.reserve(out.size() + records.size() * 220);
  for (const auto& r : records) {
    out += std::to_string(r.k);
    for (double v : {r.t, r.dt, r.v_x, r.v_a, r.vbar_x, r.vbar_a, r.ds2_drift, r.ds2_noise}) {
      out += ',';
      out += format_double(v);
    }
    out += ',';
    out += std::to_string(r.nfe_cum);
    out += ',';
    out += format_double(r.state_norm);
    out += '\n';
  }
  return out;
}

namespace {

ordered_json report_json(const SummaryReport& r) {
  auto opt = [](const std::optional<double>& v) -> ordered_json {
    return v ? ordered_json(*v) : ordered_json(nullptr);
  };
  return ordered_json{{"n_chains", r.n_chains},
                      {"total_steps", r.total_steps},
                      {"total_nfe", r.total_nfe},
                      {"mean_steps", r.mean_steps},
                      {"evals_per_step", r.evals_per_step},
                      {"components", r.components},
                      {"terminal_error_w2", opt(r.terminal_error_w2)},
                      {"mmd_degree", opt(r.mmd_degree)},
                      {"mmd_spectral", opt(r.mmd_spectral)},
                      {"mmd_bandwidth_degree", opt(r.bandwidth_degree)},
                      {"mmd_bandwidth_spectral", opt(r.bandwidth_spectral)},
                      {"arc_cv", r.arc_cv},
                      {"wall_time_per_step", r.wall_time_per_step}};
}

void print_summary(std::ostream& os, const RunConfig& cfg, const SummaryReport& r) {
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("n/a");
  };
  os << "problem            " << cfg.problem << '\n'
     << "solver / schedule  " << to_string(cfg.solver) << " / " << to_string(cfg.schedule.kind)
     << '\n'
     << "chains             " << r.n_chains << '\n'
     << "total_steps        " << r.total_steps << '\n'
     << "total_nfe          " << r.total_nfe << '\n'
     << "mean_steps         " << format_double(r.mean_steps) << '\n'
     << "terminal_error_w2  " << opt(r.terminal_error_w2) << '\n'
     << "mmd_degree         " << opt(r.mmd_degree) << '\n'
     << "mmd_spectral       " << opt(r.mmd_spectral) << '\n'
     << "arc_cv             " << format_double(r.arc_cv) << '\n'
     << "wall_time_per_step " << format_double(r.wall_time_per_step) << " s\n";
}

std::string arc_profile_csv(std::span<const SamplerResult> chains) {
  std::string out = "chain,steps,mean_ds2_drift,std_ds2_drift,cv,total_ds2\n";
  for (std::size_t i = 0; i < chains.size(); ++i) {
    const auto samples = line_elements(chains[i].records);
    ArcProfile p;
    if (!samples.empty()) p = arc_length_profile(samples);
    out += std::to_string(i) + ',' + std::to_string(chains[i].records.size());
    for (double v : {p.mean, p.std, p.cv, p.total_ds2}) out += ',' + format_double(v);
    out += '\n';
  }
  return out;
}

struct Executed {
  SummaryReport summary;
  std::vector<SamplerResult> chains;
};

Executed execute(const RunConfig& config) {
  config.validate();
  const ToyProblem problem = make_toy_problem(config.problem);
  const auto start = std::chrono::steady_clock::now();
  auto chains = run_chains(problem, config.schedule, config.solver, config.seed,
                           config.n_chains);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  SummaryReport rep = summarize(problem, config.solver, chains, wall);
  return {rep, std::move(chains)};
}

}  // namespace

std::string summary_json(const RunConfig& config, const SummaryReport& report) {
  ordered_json root;
  root["summary"] = report_json(report);
  root["config"] = ordered_json::parse(run_config_to_json(config, -1));
  root["rng"] = std::string(kRngIdentifier);
  root["mmd_bandwidth_rule"] = "median pairwise distance";
  root["edge_threshold"] = 0.5;
  return root.dump(2) + "\n";
}

SummaryReport run_experiment(const RunConfig& config, std::ostream* log) {
  Executed run = execute(config);
  const auto& dir = config.output_dir;
  if (config.emit.contains(EmitKind::kTrajectory)) {
    for (std::size_t i = 0; i < run.chains.size(); ++i) {
      write_file_atomic(dir / ("trajectory_" + std::to_string(i) + ".csv"),
                        trajectory_csv(run.chains[i].records));
    }
  }
  if (config.emit.contains(EmitKind::kArcProfile)) {
    write_file_atomic(dir / "arc_profile.csv", arc_profile_csv(run.chains));
  }
  if (config.emit.contains(EmitKind::kSummary)) {
    write_file_atomic(dir / "summary.json", summary_json(config, run.summary));
  }
  if (log != nullptr) print_summary(*log, config, run.summary);
  return run.summary;
}

std::vector<SweepRow> run_gamma_sweep(const RunConfig& config, std::span<const double> gammas,
                                      std::ostream* log) {
  if (config.schedule.kind != StepScheduleKind::kDvs) {
    throw ConfigError("a gamma sweep needs the dvs schedule");
  }
  if (gammas.empty()) throw ConfigError("a gamma sweep needs at least one value");
  std::vector<SweepRow> rows;
  for (double gamma : gammas) {
    RunConfig c = config;
    c.schedule.controller.gamma = gamma;
    rows.push_back({gamma, execute(c).summary});
  }
  std::string csv = "gamma,total_steps,total_nfe,mean_steps,terminal_error_w2,arc_cv\n";
  for (const auto& r : rows) {
    csv += format_double(r.value) + ',' + std::to_string(r.summary.total_steps) + ',' +
           std::to_string(r.summary.total_nfe) + ',' + format_double(r.summary.mean_steps) +
           ',' +
           (r.summary.terminal_error_w2 ? format_double(*r.summary.terminal_error_w2) : "") +
           ',' + format_double(r.summary.arc_cv) + '\n';
  }
  if (config.emit.contains(EmitKind::kGammaSweep)) {
    write_file_atomic(config.output_dir / "gamma_sweep.csv", csv);
  }
  if (log != nullptr) *log << csv;
  return rows;
}

ScalingProbeResult run_scaling_probe(const RunConfig& config, std::span<const double> dt_grid,
                                     std::size_t n_reps, std::ostream* log) {
  config.validate();
  ToyProblem problem = make_toy_problem(config.problem);
  RandomStream stream(config.seed, 0);
  const SystemState start = problem.init_sampler(stream);
  ScalingProbeResult res;
  res.t = 0.5 * problem.horizon;
  res.points = scaling_ratio_probe(problem.field, problem.schedule, start, res.t, dt_grid,
                                   n_reps, stream);
  res.slope = fit_loglog_slope(res.points);
  std::string csv = "dt,mean_ratio\n";
  for (const auto& p : res.points) csv += format_double(p.dt) + ',' + format_double(p.mean_ratio) + '\n';
  if (config.emit.contains(EmitKind::kScalingProbe)) {
    write_file_atomic(config.output_dir / "scaling_probe.csv", csv);
  }
  if (log != nullptr) *log << csv << "slope " << format_double(res.slope) << '\n';
  return res;
}

}  // namespace dvs
