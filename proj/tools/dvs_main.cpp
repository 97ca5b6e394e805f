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

// Command-line front end: run, sweep, probe-scaling, verify-fim.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dvs/config.hpp"
#include "dvs/errors.hpp"
#include "dvs/experiment.hpp"
#include "dvs/info_geometry.hpp"
#include "dvs/random.hpp"

namespace {

std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw dvs::ConfigError("--values: '" + item + "' is not a number");
    }
    out.push_back(v);
  }
  if (out.empty()) throw dvs::ConfigError("--values: empty list");
  return out;
}

int verify_fim(double g, double dt, int dim, std::size_t samples, std::uint64_t seed) {
  const Eigen::MatrixXd exact = dvs::fim_closed_form(g, dt, dim);
  const dvs::FimEstimate est =
      dvs::fim_monte_carlo_oracle(g, dt, dim, samples, dvs::RandomStream(seed, 0));
  std::cout << "entry,closed_form,monte_carlo,std_error\n";
  bool ok = true;
  for (Eigen::Index i = 0; i < exact.rows(); ++i) {
    for (Eigen::Index j = 0; j < exact.cols(); ++j) {
      const double e = exact(i, j);
      const double m = est.mean(i, j);
      const double se = est.std_error(i, j);
      std::cout << i << ':' << j << ',' << dvs::format_double(e) << ','
                << dvs::format_double(m) << ',' << dvs::format_double(se) << '\n';
      const bool entry_ok = e != 0.0 ? std::abs(m - e) <= 0.05 * std::abs(e)
                                     : std::abs(m) <= 3.0 * se;
      ok = ok && entry_ok;
    }
  }
  std::cout << (ok ? "match" : "MISMATCH") << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Drift-variation adaptive SDE sampler"};
  app.require_subcommand(1);

  std::string config_path;

  auto* run = app.add_subcommand("run", "Run one experiment from a JSON config");
  run->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);

  std::string param;
  std::string values;
  auto* sweep = app.add_subcommand("sweep", "Repeat an experiment over a parameter grid");
  sweep->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", param, "Parameter to sweep")
      ->required()
      ->check(CLI::IsMember({"gamma"}));
  sweep->add_option("--values", values, "Comma-separated values")->required();

  auto* probe = app.add_subcommand("probe-scaling", "Drift/noise variation ratio against dt");
  probe->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);

  double g = 1.0;
  double dt = 0.01;
  int dim = 1;
  std::size_t samples = 1000000;
  std::uint64_t seed = 0;
  auto* fim = app.add_subcommand("verify-fim", "Compare the Monte-Carlo FIM with its closed form");
  fim->add_option("--g", g, "Diffusion coefficient")->required()->check(CLI::PositiveNumber);
  fim->add_option("--dt", dt, "Step size")->required()->check(CLI::PositiveNumber);
  fim->add_option("--dim", dim, "State dimension")->required()->check(CLI::PositiveNumber);
  fim->add_option("--samples", samples, "Monte-Carlo sample count")
      ->required()
      ->check(CLI::PositiveNumber);
  fim->add_option("--seed", seed, "RNG seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      dvs::run_experiment(dvs::load_run_config(config_path), &std::cout);
    } else if (*sweep) {
      const auto cfg = dvs::load_run_config(config_path);
      dvs::run_gamma_sweep(cfg, parse_value_list(values), &std::cout);
    } else if (*probe) {
      dvs::run_scaling_probe(dvs::load_run_config(config_path), dvs::kProbeDtGrid,
                             dvs::kProbeReps, &std::cout);
    } else if (*fim) {
      return verify_fim(g, dt, dim, samples, seed);
    }
  } catch (const dvs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
