// Copyright 2026 The locme Authors
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

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "locme/commands.hpp"
#include "locme/errors.hpp"

using namespace locme;

int main(int argc, char** argv) {
  CLI::App app{"locme: local master equation steady states and thermodynamic audits"};
  app.require_subcommand(1);

  std::string config;
  Overrides overrides;
  std::string output, format, method;
  std::uint64_t seed = 0;
  double tol = 0;
  int order = 0;
  unsigned threads = 0;

  const auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config, "scenario file (YAML)")->check(CLI::ExistingFile);
    if (config_required) opt->required();
    sub->add_option("--output", output, "output directory");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", seed, "random seed for sweeps");
    sub->add_option("--tol", tol, "solver failure tolerance");
    sub->add_option("--order", order, "perturbative truncation order K")->check(CLI::NonNegativeNumber);
  };

  auto* solve = app.add_subcommand("solve", "steady state at the scenario's base point");
  add_common(solve, true);
  solve->add_option("--method", method, "exact, perturbative, closed_form, evolve or all");
  auto* sweep = app.add_subcommand("sweep", "solve every sweep point");
  add_common(sweep, true);
  sweep->add_option("--method", method, "exact, perturbative, closed_form, evolve or all");
  sweep->add_option("--threads", threads, "worker threads (0 = all cores)");
  auto* verify = app.add_subcommand("verify", "cross-solver and thermodynamic invariants");
  add_common(verify, false);
  auto* series = app.add_subcommand("series", "perturbative terms and truncation errors");
  add_common(series, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  CLI::App* active = app.get_subcommands().front();
  const auto given = [&](const char* name) { return active->count(name) > 0; };

  try {
    if (given("--output")) overrides.output = output;
    if (given("--format")) overrides.format = parse_format(format);
    if (given("--seed")) overrides.seed = seed;
    if (given("--tol")) overrides.tol = tol;
    if (given("--order")) overrides.order = order;
    if (active->get_option_no_throw("--method") && given("--method")) {
      overrides.methods = parse_methods(method);
    }

    std::vector<Scenario> scenarios;
    if (!config.empty()) {
      scenarios.push_back(load_scenario(config));
    } else {
      scenarios = {default_two_qubit_scenario(), default_refrigerator_scenario()};
    }
    for (auto& s : scenarios) apply_overrides(s, overrides);
    for (const auto& s : scenarios) {
      for (const auto& w : s.base_model().warnings()) std::cerr << "warning: " << w << "\n";
    }

    CommandOutput result;
    const std::string name = active->get_name();
    if (name == "solve") {
      result = command_solve(scenarios.front());
    } else if (name == "sweep") {
      result = command_sweep(scenarios.front(), threads);
    } else if (name == "series") {
      result = command_series(scenarios.front());
    } else {
      result = command_verify(scenarios);
    }
    write_output(scenarios.front().output_path, result);
    std::cout << result.summary;
    for (const auto& [file, contents] : result.files) {
      std::cout << "wrote " << (std::filesystem::path(scenarios.front().output_path) / file).string()
                << "\n";
    }
    return result.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const PointFailure& e) {
    std::cerr << "solver failure at " << e.what() << "\n";
    return exit_solver;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return exit_solver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
