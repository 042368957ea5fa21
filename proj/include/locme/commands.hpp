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

// Subcommands behind the locme executable.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "locme/report.hpp"
#include "locme/scenario.hpp"

namespace locme {

enum ExitCode : int {
  exit_ok = 0,
  exit_config = 2,
  exit_solver = 3,
  exit_verification = 4,
};

/// Command-line values that take precedence over the scenario file.
struct Overrides {
  std::optional<std::string> output;
  std::optional<OutputFormat> format;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;  ///< replaces tolerances.failure
  std::optional<int> order;
  std::optional<std::vector<Method>> methods;
};

/// Applies the overrides and revalidates. Throws ConfigError.
void apply_overrides(Scenario& scenario, const Overrides& overrides);

/// A solver failed at a sweep point; the message names the point.
class PointFailure : public std::runtime_error {
 public:
  PointFailure(std::size_t point, const std::string& what)
      : std::runtime_error(what), point_(point) {}
  std::size_t point() const noexcept { return point_; }

 private:
  std::size_t point_;
};

/// "E1=1, E2=1, beta1=1, beta2=0.5, p1=0.1, p2=0.1, g=0.05"
std::string describe_point(const ParameterPoint& point);

SteadyStateResult solve_with(const SystemModel& model, Method method, const Scenario& scenario);
PointRecord make_record(const Scenario& scenario, std::size_t index, const ParameterPoint& point,
                        Method method);

/// Every point times every configured method, in sweep order. Points run on up to
/// `threads` workers (0 = hardware concurrency). Throws PointFailure for the first
/// failing point in sweep order.
std::vector<PointRecord> solve_points(const Scenario& scenario,
                                      const std::vector<ParameterPoint>& points,
                                      unsigned threads = 0);

/// Frobenius distances between the states of `records`.
std::vector<std::vector<double>> agreement_matrix(const std::vector<PointRecord>& records);

struct VerifyCheck {
  std::string model;
  std::string name;
  double value = 0;
  double tolerance = 0;
  bool pass = true;
  bool informational = false;  ///< reported, never fails the run
};

/// Cross-solver and thermodynamic invariants at the scenario's base point.
/// Throws SolverError if a solver fails outright.
std::vector<VerifyCheck> verification_suite(const Scenario& scenario);

/// Output files produced by a command, written only after everything succeeded.
struct CommandOutput {
  std::vector<std::pair<std::string, std::string>> files;  ///< name, contents
  std::string summary;
  int exit_code = exit_ok;
};

CommandOutput command_solve(const Scenario& scenario);
CommandOutput command_sweep(const Scenario& scenario, unsigned threads = 0);
CommandOutput command_series(const Scenario& scenario);
CommandOutput command_verify(const std::vector<Scenario>& scenarios);

/// Creates `directory` and writes the files into it.
void write_output(const std::string& directory, const CommandOutput& output);

}  // namespace locme
