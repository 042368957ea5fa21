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

#include <optional>
#include <string>
#include <vector>

#include "locme/operator_algebra.hpp"

namespace locme {

using Liouvillian = Superoperator<double>;

/// Single-qubit basis: |0> is the excited state (sigma_z = +1), |1> the ground
/// state. sigma_+ = |0><1| raises ground to excited.
enum class Pauli { x, y, z, plus, minus };

/// Single-qubit Pauli operator acting on `qubit` of an `n_qubits` register.
Eigen::MatrixXcd pauli(Pauli which, Index qubit, Index n_qubits);

/// One qubit coupled to its own bath. Units: hbar = k_B = 1.
class QubitSpec {
 public:
  /// Throws std::invalid_argument unless energy, beta and rate are positive and finite.
  QubitSpec(double energy, double beta, double rate);
  static QubitSpec from_temperature(double energy, double temperature, double rate);

  double energy() const noexcept { return energy_; }
  double beta() const noexcept { return beta_; }
  double rate() const noexcept { return rate_; }
  double temperature() const noexcept { return 1.0 / beta_; }
  /// s = tanh(-beta E / 2), in (-1, 0).
  double polarization() const noexcept;
  /// (1 + s)/2 and (1 - s)/2.
  double excited_population() const noexcept { return (1 + polarization()) / 2; }
  double ground_population() const noexcept { return (1 - polarization()) / 2; }

 private:
  double energy_;
  double beta_;
  double rate_;
};

/// (1 + s sigma_z)/2
Eigen::MatrixXcd thermal_state(const QubitSpec& q);

/// rho -> p (tau_i kron tr_i rho - rho), with tau_i re-inserted at position i.
Liouvillian reset_dissipator(const QubitSpec& q, Index qubit, Index n_qubits);

enum class ModelKind { two_qubit, refrigerator, custom };

std::string to_string(ModelKind kind);

class SystemModel {
 public:
  /// Throws if X is not Hermitian, has the wrong dimension, or g < 0.
  SystemModel(ModelKind kind, std::vector<QubitSpec> qubits, Eigen::MatrixXcd interaction,
              double coupling);

  ModelKind kind() const noexcept { return kind_; }
  const std::vector<QubitSpec>& qubits() const noexcept { return qubits_; }
  const QubitSpec& qubit(Index i) const { return qubits_.at(static_cast<std::size_t>(i)); }
  Index n_qubits() const noexcept { return static_cast<Index>(qubits_.size()); }
  Index dim() const noexcept { return Index{1} << n_qubits(); }
  double coupling() const noexcept { return coupling_; }
  const Eigen::MatrixXcd& interaction() const noexcept { return interaction_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  /// Non-fatal remarks, e.g. an inverted refrigerator temperature ordering.
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  Eigen::MatrixXcd local_hamiltonian(Index i) const;
  Eigen::MatrixXcd free_hamiltonian() const;
  Eigen::MatrixXcd interaction_hamiltonian() const { return coupling_ * interaction_; }
  Eigen::MatrixXcd hamiltonian() const { return free_hamiltonian() + interaction_hamiltonian(); }
  /// Product of the local thermal states.
  Eigen::MatrixXcd product_thermal_state() const;

  /// E1 - E2 for the two-qubit model, E1 + E3 - E2 for the refrigerator.
  std::optional<double> detuning() const;
  /// Y or Y_r for the built-in models.
  std::optional<Eigen::MatrixXcd> coherence_operator() const;

  SystemModel with_coupling(double g) const;

 private:
  ModelKind kind_;
  std::vector<QubitSpec> qubits_;
  Eigen::MatrixXcd interaction_;
  double coupling_;
  std::vector<std::string> labels_;
  std::vector<std::string> warnings_;
};

/// X = s1+ s2- + s1- s2+
Eigen::MatrixXcd two_qubit_exchange();
/// Y = -i s1+ s2- + i s1- s2+
Eigen::MatrixXcd two_qubit_coherence();
/// X_r = s1+ s2- s3+ + s1- s2+ s3-
Eigen::MatrixXcd refrigerator_exchange();
/// Y_r = -i s1+ s2- s3+ + i s1- s2+ s3-
Eigen::MatrixXcd refrigerator_coherence();

SystemModel build_two_qubit(const QubitSpec& q1, const QubitSpec& q2, double g);
SystemModel build_refrigerator(const QubitSpec& q1, const QubitSpec& q2, const QubitSpec& q3,
                               double g);
SystemModel build_custom(std::vector<QubitSpec> qubits, Eigen::MatrixXcd interaction, double g);

/// rho -> -i[H, rho] + sum_i D_i(rho) with the full Hamiltonian.
Liouvillian liouvillian(const SystemModel& model);
/// Same generator with g = 0.
Liouvillian zeroth_order_liouvillian(const SystemModel& model);
/// sum_i D_i
Liouvillian dissipator_sum(const SystemModel& model);

}  // namespace locme
