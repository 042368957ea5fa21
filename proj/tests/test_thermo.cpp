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

#include "doctest.h"

#include <cmath>
#include <random>

#include "locme/thermo.hpp"
#include "test_support.hpp"

using namespace locme;
using locme::testing::uniform;

namespace {

double sum(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s;
}

SystemModel two_qubit(double e2, double beta2, double g, double p1 = 0.1, double p2 = 0.1) {
  return build_two_qubit(QubitSpec(1.0, 1.0, p1), QubitSpec(e2, beta2, p2), g);
}

}  // namespace

TEST_CASE("equilibrium carries no current") {
  const auto model = build_two_qubit(QubitSpec(1.0, 0.8, 0.1), QubitSpec(1.0, 0.8, 0.3), 0.1);
  const auto report = consistency_audit(model);
  for (double q : report.heat) CHECK(std::abs(q) <= 1e-15);
  for (double q : report.interaction) CHECK(std::abs(q) <= 1e-15);
  CHECK(std::abs(report.entropy_rate) <= 1e-14);
  CHECK(report.verdict == "consistent");
}

TEST_CASE("two-qubit currents follow the coherence amplitude") {
  for (double de : {-0.6, 0.0, 0.4}) {
    for (double g : {0.01, 0.1}) {
      const auto model = two_qubit(1.0 - de, 0.4, g, 0.1, 0.25);
      const auto cf = closed_form_two_qubit(model);
      const auto q = heat_currents(model, cf.state.rho);
      const auto qg = interaction_currents(model, cf.state.rho);
      const auto formula = current_formula(model, cf.coefficients.d);
      for (int i = 0; i < 2; ++i) {
        CHECK(std::abs(q[i] - formula.heat[i]) <= 1e-10);
        CHECK(std::abs(qg[i] - formula.interaction[i]) <= 1e-10);
        // Difference between bath and interaction currents scales with the detuning.
        CHECK(std::abs(q[i] - qg[i] -
                       2 * g * cf.coefficients.d * model.qubit(i).rate() / cf.coefficients.q * de) <=
              1e-12);
      }
      const auto exact = exact_steady_state(model).rho;
      CHECK(std::abs(sum(heat_currents(model, exact))) <= 1e-12);
      CHECK(std::abs(sum(interaction_currents(model, exact)) + 2 * g * cf.coefficients.d * de) <=
            1e-12);
    }
  }
}

TEST_CASE("refrigerator currents have the same form") {
  const auto model = build_refrigerator(QubitSpec::from_temperature(1.0, 1.0, 0.1),
                                        QubitSpec::from_temperature(2.5, 2.0, 0.2),
                                        QubitSpec::from_temperature(1.0, 10.0, 0.3), 0.05);
  const auto rho = exact_steady_state(model).rho;
  const auto c = project_refrigerator_coefficients(model, rho);
  const auto formula = current_formula(model, c.d);
  const auto q = heat_currents(model, rho);
  const auto qg = interaction_currents(model, rho);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(q[i] - formula.heat[i]) <= 1e-12);
    CHECK(std::abs(qg[i] - formula.interaction[i]) <= 1e-12);
  }
  CHECK(std::abs(sum(q)) <= 1e-12);
  CHECK(std::abs(sum(qg) + 2 * 0.05 * c.d * c.detuning) <= 1e-12);
}

TEST_CASE("interaction currents vanish without coupling") {
  const auto model = two_qubit(0.5, 0.3, 0.0);
  for (double q : interaction_currents(model, exact_steady_state(model).rho)) CHECK(q == 0.0);
}

TEST_CASE("free-Hamiltonian current variant") {
  const auto model = two_qubit(0.7, 0.3, 0.1);
  const auto rho = exact_steady_state(model).rho;
  const auto full = heat_currents(model, rho, CurrentHamiltonian::full);
  const auto free = heat_currents(model, rho, CurrentHamiltonian::free);
  for (Index i = 0; i < 2; ++i) {
    const auto d = reset_dissipator(model.qubit(i), i, 2);
    const double gx = (model.interaction_hamiltonian() * d.apply(rho)).trace().real();
    CHECK(std::abs(full[i] - free[i] - gx) <= 1e-15);
  }
}

TEST_CASE("entropy production") {
  const std::vector<double> zero{0.0, 0.0}, temps{1.0, 2.0};
  CHECK(entropy_production(zero, temps) == 0.0);
  const std::vector<double> flow{-1.0, 1.0};
  CHECK(entropy_production(flow, temps) == doctest::Approx(0.5));
  const std::vector<double> bad{1.0, 0.0};
  CHECK_THROWS_AS(entropy_production(flow, bad), std::invalid_argument);
  const std::vector<double> short_list{1.0};
  CHECK_THROWS_AS(entropy_production(flow, short_list), std::invalid_argument);
}

TEST_CASE("resonant two-qubit transport obeys both laws") {
  const auto model = two_qubit(1.0, 0.5, 0.05);
  const auto report = consistency_audit(model);
  CHECK(report.entropy_rate > 0);
  CHECK(report.verdict == "consistent");
  CHECK(report.first_law_ok);
  CHECK(report.second_law_ok);
  CHECK(std::abs(report.heat[0] + report.heat[1]) <= 1e-15);
  // Qubit 1 is colder, so heat leaves bath 2 and enters bath 1.
  CHECK(report.heat[0] < 0);
  for (int i = 0; i < 2; ++i) CHECK(std::abs(report.heat[i] - report.interaction[i]) <= 1e-12);
  CHECK(report.first_law_g_residual <= 1e-12);
}

TEST_CASE("second law holds at resonance for random draws") {
  std::mt19937_64 rng(83);
  for (int k = 0; k < 200; ++k) {
    const double e = uniform(rng, 0.2, 3);
    const auto model =
        build_two_qubit(QubitSpec(e, uniform(rng, 0.1, 3), uniform(rng, 0.05, 1)),
                        QubitSpec(e, uniform(rng, 0.1, 3), uniform(rng, 0.05, 1)),
                        uniform(rng, 0.001, 0.3));
    CHECK(consistency_audit(model).entropy_rate >= -1e-12);
  }
}

TEST_CASE("second-law violation search") {
  const auto found = find_second_law_violation(20181);
  REQUIRE(found.has_value());
  // Regression anchor: first point the deterministic grid reaches.
  CHECK(found->e1 == 1.0);
  CHECK(found->e2 == 3.0);
  CHECK(found->beta1 == 1.0);
  CHECK(found->beta2 == 0.5);
  CHECK(found->p1 == 0.1);
  CHECK(found->p2 == 0.1);
  CHECK(found->g == 0.05);
  CHECK(found->entropy_rate == doctest::Approx(-2.1309334375302168e-05).epsilon(1e-9));
  CHECK(found->evaluated == 49);

  const auto report = consistency_audit(found->model());
  CHECK(report.verdict == "second-law violation");
  CHECK(report.entropy_rate < -1e-6);
  CHECK(*report.detuning < 0);
  // Mechanism: negative detuning with -beta1 E1 + beta2 E2 > 0.
  CHECK(-found->beta1 * found->e1 + found->beta2 * found->e2 > 0);
  // Bath currents still conserve energy; the interaction currents do not.
  CHECK(report.first_law_ok);
  CHECK(report.first_law_g_residual > 1e-6);

  CHECK_FALSE(find_second_law_violation(1, -1.0, 10).has_value());
}

TEST_CASE("refrigeration indicator") {
  // beta1 E1 + beta3 E3 < beta2 E2 puts the machine in its cooling window.
  const auto cooling = build_refrigerator(QubitSpec::from_temperature(1.0, 1.0, 0.1),
                                          QubitSpec::from_temperature(2.0, 1.5, 0.1),
                                          QubitSpec::from_temperature(1.0, 10.0, 0.1), 0.05);
  const auto report = consistency_audit(cooling);
  REQUIRE(report.cooling.has_value());
  CHECK(*report.cooling);
  CHECK(report.heat[0] == doctest::Approx(0.0002760936013263282).epsilon(1e-10));
  CHECK(report.entropy_rate >= 0);
  CHECK(report.verdict == "consistent");

  // Outside the window the same device heats its target.
  const auto heating = build_refrigerator(QubitSpec::from_temperature(1.0, 1.0, 0.1),
                                          QubitSpec::from_temperature(2.0, 2.0, 0.1),
                                          QubitSpec::from_temperature(1.0, 10.0, 0.1), 0.05);
  CHECK_FALSE(*consistency_audit(heating).cooling);
  CHECK_FALSE(consistency_audit(two_qubit(1.0, 0.5, 0.05)).cooling.has_value());
}
