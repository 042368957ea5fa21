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

// Declarative scenario files. The schema is documented in docs/scenario.md.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "locme/model.hpp"
#include "locme/solvers.hpp"
#include "locme/thermo.hpp"

namespace locme {

/// Malformed or inconsistent scenario; the message names the line and field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

/// Values of every sweepable parameter at one point. Qubit vectors are
/// indexed from 0; parameter names are 1-based (E1, beta2, T3, p1, g).
struct ParameterPoint {
  std::vector<double> energy;
  std::vector<double> beta;
  std::vector<double> rate;
  double g = 0;

  /// Throws ConfigError for unknown names or out-of-range qubit numbers.
  void set(const std::string& name, double value);
  double get(const std::string& name) const;
};

struct SweepAxis {
  std::string parameter;
  double from = 0;
  double to = 0;
  int steps = 1;
  bool random = false;  ///< draw `steps` uniform values instead of a linear grid
};

struct Scenario {
  ModelKind kind = ModelKind::two_qubit;
  ParameterPoint base;
  std::optional<Eigen::MatrixXcd> interaction;  ///< custom models only

  std::vector<Method> methods{Method::exact};
  int order = 3;
  EvolveOptions evolve;
  CurrentHamiltonian current = CurrentHamiltonian::full;

  std::vector<SweepAxis> sweep;
  std::vector<double> series_couplings{0.2, 0.1, 0.05, 0.025};

  OutputFormat format = OutputFormat::csv;
  std::string output_path = "locme-out";
  bool emit_states = false;

  Tolerances tol;
  std::uint64_t seed = 0;

  SystemModel model_at(const ParameterPoint& point) const;
  SystemModel base_model() const { return model_at(base); }
  /// Cartesian product of the sweep axes in declaration order; the base point
  /// alone when no sweep is configured. Deterministic for a fixed seed.
  std::vector<ParameterPoint> sweep_points() const;
};

/// Checks cross-field constraints and that every sweep point builds a valid
/// model. Throws ConfigError.
void validate_scenario(const Scenario& scenario);

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Built-in defaults: E = (1, 1), beta = (1, 0.5), p = 0.1, g = 0.05.
Scenario default_two_qubit_scenario();
/// E = (1, 2, 1), T = (1, 2, 10), p = 0.1, g = 0.05.
Scenario default_refrigerator_scenario();

std::vector<Method> parse_methods(const std::string& text);
OutputFormat parse_format(const std::string& text);

}  // namespace locme
