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

#include "locme/model.hpp"

#include <cmath>
#include <stdexcept>

namespace locme {

namespace {

Eigen::Matrix2cd single_qubit(Pauli which) {
  using C = std::complex<double>;
  Eigen::Matrix2cd m;
  switch (which) {
    case Pauli::x: m << 0, 1, 1, 0; break;
    case Pauli::y: m << 0, C(0, -1), C(0, 1), 0; break;
    case Pauli::z: m << 1, 0, 0, -1; break;
    case Pauli::plus: m << 0, 1, 0, 0; break;
    case Pauli::minus: m << 0, 0, 1, 0; break;
  }
  return m;
}

void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0) {
    throw std::invalid_argument(std::string("QubitSpec: ") + name +
                                " must be positive and finite, got " + std::to_string(v));
  }
}

std::vector<Index> qubit_dims(Index n) { return std::vector<Index>(static_cast<std::size_t>(n), 2); }

}  // namespace

Eigen::MatrixXcd pauli(Pauli which, Index qubit, Index n_qubits) {
  if (n_qubits < 1 || qubit < 0 || qubit >= n_qubits) {
    throw std::out_of_range("pauli: qubit " + std::to_string(qubit) + " out of range for " +
                            std::to_string(n_qubits) + " qubits");
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (Index k = 0; k < n_qubits; ++k) {
    if (k == qubit) {
      out = kron(out, Eigen::MatrixXcd(single_qubit(which)));
    } else {
      out = kron(out, Eigen::MatrixXcd::Identity(2, 2));
    }
  }
  return out;
}

QubitSpec::QubitSpec(double energy, double beta, double rate)
    : energy_(energy), beta_(beta), rate_(rate) {
  require_positive(energy, "energy");
  require_positive(beta, "beta");
  require_positive(rate, "rate");
}

QubitSpec QubitSpec::from_temperature(double energy, double temperature, double rate) {
  require_positive(temperature, "temperature");
  return QubitSpec(energy, 1.0 / temperature, rate);
}

double QubitSpec::polarization() const noexcept { return std::tanh(-beta_ * energy_ / 2); }

Eigen::MatrixXcd thermal_state(const QubitSpec& q) {
  const double s = q.polarization();
  Eigen::MatrixXcd tau = Eigen::MatrixXcd::Zero(2, 2);
  tau(0, 0) = (1 + s) / 2;
  tau(1, 1) = (1 - s) / 2;
  return tau;
}

Liouvillian reset_dissipator(const QubitSpec& q, Index qubit, Index n_qubits) {
  if (n_qubits < 1 || qubit < 0 || qubit >= n_qubits) {
    throw std::out_of_range("reset_dissipator: qubit index out of range");
  }
  const Eigen::MatrixXcd tau = thermal_state(q);
  const std::vector<Index> dims = qubit_dims(n_qubits);
  const std::vector<Index> rest_dims = qubit_dims(n_qubits - 1);
  const std::vector<Index> traced{qubit};
  const double p = q.rate();
  return superoperator_from_map<double>(Index{1} << n_qubits, [&](const Eigen::MatrixXcd& rho) {
    const Eigen::MatrixXcd reduced = partial_trace(rho, dims, traced);
    return Eigen::MatrixXcd(p * (insert_subsystem(reduced, rest_dims, tau, qubit) - rho));
  });
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::two_qubit: return "two_qubit";
    case ModelKind::refrigerator: return "refrigerator";
    case ModelKind::custom: return "custom";
  }
  return "unknown";
}

SystemModel::SystemModel(ModelKind kind, std::vector<QubitSpec> qubits,
                         Eigen::MatrixXcd interaction, double coupling)
    : kind_(kind), qubits_(std::move(qubits)), interaction_(std::move(interaction)),
      coupling_(coupling) {
  if (qubits_.empty()) throw std::invalid_argument("SystemModel: no qubits");
  if (qubits_.size() > 10) throw std::invalid_argument("SystemModel: more than 10 qubits");
  if (interaction_.rows() != dim() || interaction_.cols() != dim()) {
    throw DimensionMismatch("SystemModel: interaction must be " + std::to_string(dim()) + "x" +
                            std::to_string(dim()));
  }
  if (!is_hermitian(interaction_, 1e-12)) {
    throw std::invalid_argument("SystemModel: interaction is not Hermitian");
  }
  if (!std::isfinite(coupling_) || coupling_ < 0) {
    throw std::invalid_argument("SystemModel: coupling must be finite and >= 0");
  }
  switch (kind_) {
    case ModelKind::two_qubit:
      if (qubits_.size() != 2) throw std::invalid_argument("two_qubit model needs 2 qubits");
      labels_ = {"q1", "q2"};
      break;
    case ModelKind::refrigerator:
      if (qubits_.size() != 3) throw std::invalid_argument("refrigerator model needs 3 qubits");
      labels_ = {"cold", "room", "hot"};
      if (!(qubits_[0].temperature() < qubits_[1].temperature() &&
            qubits_[1].temperature() < qubits_[2].temperature())) {
        warnings_.emplace_back("refrigerator temperatures are not ordered T1 < T2 < T3");
      }
      break;
    case ModelKind::custom:
      for (std::size_t i = 0; i < qubits_.size(); ++i) labels_.push_back("q" + std::to_string(i + 1));
      break;
  }
}

Eigen::MatrixXcd SystemModel::local_hamiltonian(Index i) const {
  return qubit(i).energy() / 2 * pauli(Pauli::z, i, n_qubits());
}

Eigen::MatrixXcd SystemModel::free_hamiltonian() const {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim(), dim());
  for (Index i = 0; i < n_qubits(); ++i) h += local_hamiltonian(i);
  return h;
}

Eigen::MatrixXcd SystemModel::product_thermal_state() const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (const auto& q : qubits_) out = kron(out, thermal_state(q));
  return out;
}

std::optional<double> SystemModel::detuning() const {
  switch (kind_) {
    case ModelKind::two_qubit: return qubits_[0].energy() - qubits_[1].energy();
    case ModelKind::refrigerator:
      return qubits_[0].energy() + qubits_[2].energy() - qubits_[1].energy();
    case ModelKind::custom: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<Eigen::MatrixXcd> SystemModel::coherence_operator() const {
  switch (kind_) {
    case ModelKind::two_qubit: return two_qubit_coherence();
    case ModelKind::refrigerator: return refrigerator_coherence();
    case ModelKind::custom: return std::nullopt;
  }
  return std::nullopt;
}

SystemModel SystemModel::with_coupling(double g) const {
  return SystemModel(kind_, qubits_, interaction_, g);
}

Eigen::MatrixXcd two_qubit_exchange() {
  const Eigen::MatrixXcd up_down = pauli(Pauli::plus, 0, 2) * pauli(Pauli::minus, 1, 2);
  return up_down + up_down.adjoint();
}

Eigen::MatrixXcd two_qubit_coherence() {
  const std::complex<double> i(0, 1);
  const Eigen::MatrixXcd up_down = pauli(Pauli::plus, 0, 2) * pauli(Pauli::minus, 1, 2);
  return -i * up_down + i * up_down.adjoint();
}

Eigen::MatrixXcd refrigerator_exchange() {
  const Eigen::MatrixXcd term =
      pauli(Pauli::plus, 0, 3) * pauli(Pauli::minus, 1, 3) * pauli(Pauli::plus, 2, 3);
  return term + term.adjoint();
}

Eigen::MatrixXcd refrigerator_coherence() {
  const std::complex<double> i(0, 1);
  const Eigen::MatrixXcd term =
      pauli(Pauli::plus, 0, 3) * pauli(Pauli::minus, 1, 3) * pauli(Pauli::plus, 2, 3);
  return -i * term + i * term.adjoint();
}

SystemModel build_two_qubit(const QubitSpec& q1, const QubitSpec& q2, double g) {
  return SystemModel(ModelKind::two_qubit, {q1, q2}, two_qubit_exchange(), g);
}

SystemModel build_refrigerator(const QubitSpec& q1, const QubitSpec& q2, const QubitSpec& q3,
                               double g) {
  return SystemModel(ModelKind::refrigerator, {q1, q2, q3}, refrigerator_exchange(), g);
}

SystemModel build_custom(std::vector<QubitSpec> qubits, Eigen::MatrixXcd interaction, double g) {
  return SystemModel(ModelKind::custom, std::move(qubits), std::move(interaction), g);
}

Liouvillian dissipator_sum(const SystemModel& model) {
  Liouvillian out = Liouvillian::Zero(model.dim());
  for (Index i = 0; i < model.n_qubits(); ++i) {
    out += reset_dissipator(model.qubit(i), i, model.n_qubits());
  }
  return out;
}

Liouvillian liouvillian(const SystemModel& model) {
  return hamiltonian_superoperator<double>(model.hamiltonian()) + dissipator_sum(model);
}

Liouvillian zeroth_order_liouvillian(const SystemModel& model) {
  return hamiltonian_superoperator<double>(model.free_hamiltonian()) + dissipator_sum(model);
}

}  // namespace locme
