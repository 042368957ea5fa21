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

#include "locme/thermo.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace locme {

std::vector<double> heat_currents(const SystemModel& model, const Eigen::MatrixXcd& rho,
                                  CurrentHamiltonian hamiltonian) {
  const Eigen::MatrixXcd h =
      hamiltonian == CurrentHamiltonian::full ? model.hamiltonian() : model.free_hamiltonian();
  std::vector<double> q;
  for (Index i = 0; i < model.n_qubits(); ++i) {
    const Liouvillian d = reset_dissipator(model.qubit(i), i, model.n_qubits());
    q.push_back((h * d.apply(rho)).trace().real());
  }
  return q;
}

std::vector<double> interaction_currents(const SystemModel& model, const Eigen::MatrixXcd& rho) {
  const std::complex<double> i_unit(0, 1);
  const Eigen::MatrixXcd drive = commutator(model.interaction_hamiltonian(), rho);
  std::vector<double> q;
  for (Index i = 0; i < model.n_qubits(); ++i) {
    q.push_back((i_unit * (model.local_hamiltonian(i) * drive).trace()).real());
  }
  return q;
}

double entropy_production(std::span<const double> heat, std::span<const double> temperatures) {
  if (heat.size() != temperatures.size()) {
    throw std::invalid_argument("entropy_production: currents and temperatures differ in length");
  }
  double rate = 0;
  for (std::size_t i = 0; i < heat.size(); ++i) {
    if (!(temperatures[i] > 0)) {
      throw std::invalid_argument("entropy_production: temperature must be positive");
    }
    rate -= heat[i] / temperatures[i];
  }
  return rate;
}

CurrentFormula current_formula(const SystemModel& model, double coherence_amplitude) {
  const auto detuning = model.detuning();
  if (!detuning) throw std::invalid_argument("current_formula: needs a built-in model");
  double q = 0;
  for (const auto& spec : model.qubits()) q += spec.rate();
  const double scale = 2 * model.coupling() * coherence_amplitude;
  CurrentFormula out;
  for (Index i = 0; i < model.n_qubits(); ++i) {
    // (-1)^i with i counted from 1
    const double sign = i % 2 == 0 ? -1.0 : 1.0;
    const double local = sign * model.qubit(i).energy();
    out.interaction.push_back(scale * local);
    out.heat.push_back(scale * (local + model.qubit(i).rate() / q * *detuning));
  }
  return out;
}

ThermoReport thermo_report(const SystemModel& model, const Eigen::MatrixXcd& rho,
                           const AuditOptions& options) {
  ThermoReport report;
  report.heat = heat_currents(model, rho, options.hamiltonian);
  report.interaction = interaction_currents(model, rho);
  for (const auto& q : model.qubits()) report.temperatures.push_back(q.temperature());
  report.entropy_rate = entropy_production(report.heat, report.temperatures);

  double sum = 0, sum_g = 0;
  for (double q : report.heat) sum += q;
  for (double q : report.interaction) sum_g += q;
  report.first_law_residual = std::abs(sum);
  report.first_law_g_residual = std::abs(sum_g);
  // Away from stationarity sum Q_i = tr[H L(rho)], bounded by ||H|| ||L(rho)||.
  report.state_residual = liouvillian(model).apply(rho).norm();
  const double storage = model.hamiltonian().norm() * report.state_residual;
  report.first_law_ok = report.first_law_residual <= options.first_law_tol + storage;
  report.second_law_ok = report.entropy_rate >= -options.second_law_tol;
  if (!report.second_law_ok) {
    report.verdict = "second-law violation";
  } else if (!report.first_law_ok) {
    report.verdict = "first-law violation";
  } else {
    report.verdict = "consistent";
  }
  report.detuning = model.detuning();
  report.coupling = model.coupling();
  if (model.kind() == ModelKind::refrigerator) report.cooling = report.heat[0] > 0;
  return report;
}

ThermoReport consistency_audit(const SystemModel& model, const AuditOptions& options) {
  return thermo_report(model, exact_steady_state(model, options.tol).rho, options);
}

SystemModel ViolationPoint::model() const {
  return build_two_qubit(QubitSpec(e1, beta1, p1), QubitSpec(e2, beta2, p2), g);
}

std::optional<ViolationPoint> find_second_law_violation(std::uint64_t seed, double threshold,
                                                         int random_draws) {
  long evaluated = 0;
  auto test = [&](ViolationPoint point) -> std::optional<ViolationPoint> {
    ++evaluated;
    const ThermoReport report = consistency_audit(point.model());
    if (report.entropy_rate < threshold) {
      point.entropy_rate = report.entropy_rate;
      point.evaluated = evaluated;
      return point;
    }
    return std::nullopt;
  };

  // Grid: detuned below resonance (E2 > E1) with the second qubit's
  // Boltzmann exponent beta2 E2 exceeding beta1 E1.
  for (double e2 : {1.5, 2.0, 3.0}) {
    for (double beta2 : {0.5, 1.0, 2.0}) {
      for (double p1 : {0.1, 1.0}) {
        for (double p2 : {0.1, 1.0}) {
          for (double g : {0.05, 0.2}) {
            ViolationPoint point;
            point.e2 = e2;
            point.beta2 = beta2;
            point.p1 = p1;
            point.p2 = p2;
            point.g = g;
            if (auto found = test(point)) return found;
          }
        }
      }
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> energy(0.2, 3.0), beta(0.1, 3.0), rate(0.05, 1.0),
      coupling(0.001, 0.2);
  for (int k = 0; k < random_draws; ++k) {
    ViolationPoint point;
    point.e1 = energy(rng);
    point.e2 = energy(rng);
    point.beta1 = beta(rng);
    point.beta2 = beta(rng);
    point.p1 = rate(rng);
    point.p2 = rate(rng);
    point.g = coupling(rng);
    if (auto found = test(point)) return found;
  }
  return std::nullopt;
}

}  // namespace locme
