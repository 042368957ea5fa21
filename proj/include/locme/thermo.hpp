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

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "locme/model.hpp"
#include "locme/solvers.hpp"

namespace locme {

/// Hamiltonian used to weigh the dissipator in Q_i = tr[H D_i(rho)].
enum class CurrentHamiltonian {
  full,  ///< H = sum_i H_i + g X
  free,  ///< sum_i H_i only
};

/// Heat current supplied by each bath, Q_i = tr[H D_i(rho)]. Positive values
/// flow from bath i into the system.
std::vector<double> heat_currents(const SystemModel& model, const Eigen::MatrixXcd& rho,
                                  CurrentHamiltonian hamiltonian = CurrentHamiltonian::full);

/// Q_i^g = i tr{H_i [g X, rho]}: rate at which the interaction changes the local energy of
/// subsystem i.
std::vector<double> interaction_currents(const SystemModel& model, const Eigen::MatrixXcd& rho);

/// -sum_i Q_i / T_i. Throws std::invalid_argument for non-positive temperatures or
/// mismatched lengths.
double entropy_production(std::span<const double> heat, std::span<const double> temperatures);

/// Currents predicted from the coherence amplitude d of a built-in model:
/// Q_i = 2 g d [(-1)^i E_i + (p_i/q) dE] and Q_i^g = 2 g d (-1)^i E_i (qubits counted from 1).
struct CurrentFormula {
  std::vector<double> heat;
  std::vector<double> interaction;
};
CurrentFormula current_formula(const SystemModel& model, double coherence_amplitude);

struct AuditOptions {
  Tolerances tol;
  double first_law_tol = 1e-12;
  double second_law_tol = 1e-12;
  CurrentHamiltonian hamiltonian = CurrentHamiltonian::full;
};

struct ThermoReport {
  std::vector<double> heat;
  std::vector<double> interaction;
  double entropy_rate = 0;
  double first_law_residual = 0;    ///< |sum Q_i|
  double first_law_g_residual = 0;  ///< |sum Q_i^g|
  /// |sum Q_i| <= first_law_tol + ||H|| ||L(rho)||; the second term vanishes at a
  /// steady state.
  bool first_law_ok = false;
  bool second_law_ok = false;
  std::string verdict;  ///< "consistent", "second-law violation" or "first-law violation"
  std::optional<double> detuning;
  double coupling = 0;
  std::vector<double> temperatures;
  /// Refrigerator only: Q_1 > 0, heat drawn out of the coldest bath.
  std::optional<bool> cooling;
  double state_residual = 0;
};

/// Thermodynamic bookkeeping for a given state.
ThermoReport thermo_report(const SystemModel& model, const Eigen::MatrixXcd& rho,
                           const AuditOptions& options = {});

/// Solves the exact steady state and reports on it.
ThermoReport consistency_audit(const SystemModel& model, const AuditOptions& options = {});

/// Two-qubit parameter point; qubit 1 has E = 1 and beta = 1 unless drawn otherwise.
struct ViolationPoint {
  double e1 = 1, e2 = 1, beta1 = 1, beta2 = 1, p1 = 0.1, p2 = 0.1, g = 0.05;
  double entropy_rate = 0;
  long evaluated = 0;  ///< points examined before this one was found

  SystemModel model() const;
};

/// Deterministic grid followed by a seeded random sweep over two-qubit
/// parameters; returns the first point whose entropy production is below
/// `threshold`.
std::optional<ViolationPoint> find_second_law_violation(std::uint64_t seed,
                                                         double threshold = -1e-6,
                                                         int random_draws = 2000);

}  // namespace locme
