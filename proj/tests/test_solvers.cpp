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

#include "locme/solvers.hpp"
#include "test_support.hpp"

using namespace locme;
using locme::testing::uniform;

namespace {

const std::complex<double> kI(0, 1);

SystemModel default_two_qubit(double g = 0.05) {
  return build_two_qubit(QubitSpec(1.0, 1.0, 0.1), QubitSpec(1.0, 0.5, 0.1), g);
}

SystemModel default_refrigerator(double g = 0.05) {
  return build_refrigerator(QubitSpec::from_temperature(1.0, 1.0, 0.1),
                            QubitSpec::from_temperature(2.0, 2.0, 0.1),
                            QubitSpec::from_temperature(1.0, 10.0, 0.1), g);
}

SystemModel random_two_qubit(std::mt19937_64& rng) {
  return build_two_qubit(
      QubitSpec(uniform(rng, 0.3, 2), uniform(rng, 0.1, 2), uniform(rng, 0.05, 1)),
      QubitSpec(uniform(rng, 0.3, 2), uniform(rng, 0.1, 2), uniform(rng, 0.05, 1)),
      uniform(rng, 0.001, 0.1));
}

bool is_diagonal(const Eigen::MatrixXcd& m, double tol) {
  Eigen::MatrixXcd off = m;
  off.diagonal().setZero();
  return off.cwiseAbs().maxCoeff() <= tol;
}

// Distance from span{a, b} of Hermitian operators (Hilbert-Schmidt projection).
double distance_from_span(const Eigen::MatrixXcd& m, const Eigen::MatrixXcd& a,
                          const Eigen::MatrixXcd& b) {
  const auto coef = [&](const Eigen::MatrixXcd& o) {
    return (o.adjoint() * m).trace() / (o.adjoint() * o).trace();
  };
  return (m - coef(a) * a - coef(b) * b).norm();
}

}  // namespace

TEST_CASE("exact steady state") {
  SUBCASE("decoupled models relax to the product of local thermal states") {
    for (const auto& model : {default_two_qubit(0), default_refrigerator(0)}) {
      const auto result = exact_steady_state(model);
      CHECK((result.rho - model.product_thermal_state()).norm() <= 1e-14);
      CHECK(result.method == Method::exact);
    }
  }

  SUBCASE("equal baths stay in equilibrium at any coupling") {
    for (double g : {0.01, 0.2, 1.0}) {
      const auto model = build_two_qubit(QubitSpec(1.2, 0.7, 0.1), QubitSpec(1.2, 0.7, 0.3), g);
      CHECK((exact_steady_state(model).rho - model.product_thermal_state()).norm() <= 1e-14);
    }
  }

  SUBCASE("default two-qubit point, frozen from an independent dense solve") {
    const auto model = default_two_qubit();
    const auto result = exact_steady_state(model);
    CHECK(result.residual <= 1e-10);
    CHECK(is_unit_trace(result.rho, 1e-14));
    CHECK(is_positive_semidefinite(result.rho, 1e-10));
    const auto c = project_two_qubit_coefficients(model, result.rho);
    CHECK(std::abs(c.d - 0.018099874571358372) <= 1e-13);
    CHECK(std::abs(c.m) <= 1e-15);
    CHECK(std::abs(c.a1 - 0.009049937285679207) <= 1e-13);
    CHECK(std::abs(c.a2 + 0.009049937285679214) <= 1e-13);
    CHECK(std::abs(c.b - 0.000982816378496728) <= 1e-13);
    CHECK((closed_form_two_qubit(model).state.rho - result.rho).norm() <= 1e-10);
  }

  SUBCASE("the reduced state of qubit 1 carries the a1 shift") {
    const auto model = default_two_qubit(0.05);
    const auto rho = exact_steady_state(model).rho;
    const std::vector<Index> dims{2, 2}, second{1};
    const Eigen::MatrixXcd reduced = partial_trace(rho, dims, second);
    const auto c = two_qubit_coefficients(model);
    // tr_2 of (tau1 tau2 + a1 s1z + ...) = tau1 + 2 a1 s1z
    const Eigen::MatrixXcd expected =
        thermal_state(model.qubit(0)) + 2 * c.a1 * pauli(Pauli::z, 0, 1);
    CHECK((reduced - expected).norm() <= 1e-12);
  }
}

TEST_CASE("perturbative series, two-qubit structure") {
  const auto model = build_two_qubit(QubitSpec(1.0, 1.0, 0.1), QubitSpec(0.7, 0.5, 0.15), 0.03);
  const auto series = perturbative_series(model, 6);
  const auto c = two_qubit_coefficients(model);
  const Eigen::MatrixXcd x = two_qubit_exchange();
  const Eigen::MatrixXcd y = two_qubit_coherence();

  REQUIRE(series.order() == 6);
  CHECK(std::abs(series.terms[0].trace() - 1.0) <= 1e-15);
  for (int k = 1; k <= 6; ++k) {
    CHECK(std::abs(series.terms[k].trace()) <= 1e-14 * std::max(1.0, series.terms[k].norm()));
    CHECK(is_hermitian(series.terms[k], 1e-10));
  }

  // First order: m1 X + d1 Y
  CHECK((series.terms[1] - (c.m1 * x + c.d1 * y)).norm() <= 1e-12);
  CHECK(c.d1 * c.q * c.q + c.d1 * c.detuning * c.detuning == doctest::Approx(-c.q * c.delta_s));

  // Odd orders live in span{X, Y}; even orders are diagonal.
  for (int k = 1; k <= 6; k += 2) CHECK(distance_from_span(series.terms[k], x, y) <= 1e-10);
  for (int k = 2; k <= 6; k += 2) CHECK(is_diagonal(series.terms[k], 1e-10));

  // Second order: a1 s1z + a2 s2z + b s1z s2z with a = +-d1/p.
  const auto z1 = pauli(Pauli::z, 0, 2), z2 = pauli(Pauli::z, 1, 2);
  const double p1 = model.qubit(0).rate(), p2 = model.qubit(1).rate();
  const double s1 = model.qubit(0).polarization(), s2 = model.qubit(1).polarization();
  const double b2 = (p2 * s2 / p1 - p1 * s1 / p2) / c.q * c.d1;
  CHECK((series.terms[2] - (c.d1 / p1 * z1 - c.d1 / p2 * z2 + b2 * z1 * z2)).norm() <= 1e-12);

  // Geometric ratio between successive odd and even orders.
  CHECK(c.x <= 0);
  for (int k = 1; k + 2 <= 6; ++k) {
    CHECK((series.terms[k + 2] - c.x * series.terms[k]).cwiseAbs().maxCoeff() <= 1e-10);
  }
  CHECK(series.convergence_ratio == doctest::Approx(std::abs(0.03 * 0.03 * c.x)));
}

TEST_CASE("perturbative series matches the recurrence residual") {
  const auto model = default_refrigerator(0.02);
  const auto series = perturbative_series(model, 4);
  const Liouvillian l0 = zeroth_order_liouvillian(model);
  for (int k = 0; k < 4; ++k) {
    const Eigen::MatrixXcd rhs = kI * commutator(model.interaction(), series.terms[k]);
    CHECK((l0.apply(series.terms[k + 1]) - rhs).norm() <= 1e-12);
  }
}

TEST_CASE("refrigerator series structure") {
  const auto model = build_refrigerator(QubitSpec::from_temperature(1.0, 1.0, 0.1),
                                        QubitSpec::from_temperature(2.4, 2.0, 0.2),
                                        QubitSpec::from_temperature(1.0, 10.0, 0.3), 0.02);
  const auto series = perturbative_series(model, 4);
  const auto c = refrigerator_coefficients(model);
  const Eigen::MatrixXcd x = refrigerator_exchange();
  const Eigen::MatrixXcd y = refrigerator_coherence();
  CHECK((series.terms[1] - (c.m1 * x + c.d1 * y)).norm() <= 1e-12);
  for (int k : {1, 3}) CHECK(distance_from_span(series.terms[k], x, y) <= 1e-10);
  for (int k : {2, 4}) CHECK(is_diagonal(series.terms[k], 1e-10));
  CHECK(series.convergence_ratio > 0);
  CHECK(series.convergence_ratio ==
        doctest::Approx(series.terms[3].norm() / series.terms[1].norm() * 0.02 * 0.02));
}

TEST_CASE("no driving term means no corrections") {
  // Equal polarizations: s1 = s2 although E and beta differ.
  const auto model = build_two_qubit(QubitSpec(1.0, 1.0, 0.1), QubitSpec(2.0, 0.5, 0.3), 0.1);
  const auto series = perturbative_series(model, 5);
  for (int k = 1; k <= 5; ++k) CHECK(series.terms[k].norm() <= 1e-15);
}

TEST_CASE("coherence is created only where the interaction drives it") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const auto model = random_two_qubit(rng);
    const auto series = perturbative_series(model, 4);
    // Coherent part in the H0 eigenbasis (computational basis) of rho^(k+1).
    for (int k = 0; k < 4; ++k) {
      Eigen::MatrixXcd coherent = series.terms[k + 1];
      coherent.diagonal().setZero();
      const double drive = commutator(model.interaction(), series.terms[k]).norm();
      if (drive <= 1e-14) CHECK(coherent.norm() <= 1e-12);
      if (coherent.norm() > 1e-12) CHECK(drive > 1e-14);
    }
  }
}

TEST_CASE("partial sums are unit trace at every order") {
  const auto series = perturbative_series(default_refrigerator(0.05), 5);
  for (int k = 0; k <= 5; ++k) CHECK(std::abs(series.partial_sum(k).trace() - 1.0) <= 1e-14);
  CHECK_THROWS_AS(series.partial_sum(6), std::out_of_range);
  CHECK_THROWS_AS(perturbative_series(default_two_qubit(), -1), std::invalid_argument);
}

TEST_CASE("perturbative steady state") {
  const auto model = default_two_qubit(0.002);
  const auto result = perturbative_steady_state(model, 5);
  CHECK(result.label() == "perturbative(5)");
  CHECK((result.rho - exact_steady_state(model).rho).norm() <= 1e-10);
  CHECK_FALSE(result.diagnostics.outside_convergence);
}

TEST_CASE("degenerate zeroth-order generator") {
  // No dissipation on the system: emulate with a pure Hamiltonian generator.
  const auto unitary = hamiltonian_superoperator<double>(default_two_qubit().free_hamiltonian());
  CHECK_THROWS_AS(TracelessSolver<double>{unitary}, SingularOnSubspace);
}

TEST_CASE("two-qubit closed form") {
  SUBCASE("zero coupling") {
    const auto cf = closed_form_two_qubit(default_two_qubit(0));
    const auto& c = cf.coefficients;
    CHECK(c.d == 0);
    CHECK(c.m == 0);
    CHECK(c.a1 == 0);
    CHECK(c.a2 == 0);
    CHECK(c.b == 0);
    CHECK((cf.state.rho - default_two_qubit(0).product_thermal_state()).norm() == 0.0);
  }

  SUBCASE("resonance removes the exchange component") {
    const auto c = two_qubit_coefficients(default_two_qubit(0.1));
    CHECK(c.m == 0.0);
    CHECK(c.d != 0.0);
  }

  SUBCASE("defaults") {
    const auto model = default_two_qubit(0.05);
    const auto c = two_qubit_coefficients(model);
    CHECK(c.q == doctest::Approx(0.2));
    CHECK(c.delta_s == doctest::Approx((std::tanh(-0.5) - std::tanh(-0.25)) / 2));
    CHECK(c.d1 == doctest::Approx(-c.delta_s / 0.2));
    CHECK(c.x == doctest::Approx(-200));
    CHECK(std::abs(c.d - 0.018099874571358372) <= 1e-14);
  }

  SUBCASE("invariants on random draws") {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 50; ++trial) {
      const auto model = random_two_qubit(rng);
      const auto cf = closed_form_two_qubit(model);
      const auto& c = cf.coefficients;
      CHECK(c.x <= 0);
      CHECK(std::abs(c.m + c.detuning / c.q * c.d) <= 1e-15);
      CHECK(std::abs(c.a1 - model.coupling() / model.qubit(0).rate() * c.d) <= 1e-15);
      CHECK(std::abs(c.a2 + model.coupling() / model.qubit(1).rate() * c.d) <= 1e-15);
      // The rational form stays exact past the radius of convergence of the series.
      CHECK((cf.state.rho - exact_steady_state(model).rho).norm() <= 1e-10);
      CHECK(cf.state.residual <= 1e-10);
    }
  }

  SUBCASE("outside the convergence radius is flagged, not rejected") {
    const auto cf = closed_form_two_qubit(default_two_qubit(0.2));
    CHECK(cf.state.diagnostics.outside_convergence);
    CHECK(cf.state.diagnostics.convergence_ratio == doctest::Approx(8.0));
    CHECK((cf.state.rho - exact_steady_state(default_two_qubit(0.2)).rho).norm() <= 1e-10);
  }

  CHECK_THROWS_AS(closed_form_two_qubit(default_refrigerator()), std::invalid_argument);
}

TEST_CASE("refrigerator closed form") {
  SUBCASE("zero coupling") {
    const auto model = default_refrigerator(0);
    CHECK((closed_form_refrigerator(model).state.rho - model.product_thermal_state()).norm() == 0.0);
  }

  SUBCASE("resonant point matches the exact solver") {
    for (double g : {0.01, 0.05}) {
      const auto model = default_refrigerator(g);
      const auto cf = closed_form_refrigerator(model);
      CHECK(cf.coefficients.detuning == 0.0);
      CHECK(cf.coefficients.m == 0.0);
      CHECK((cf.state.rho - exact_steady_state(model).rho).norm() <= 1e-8);
    }
  }

  SUBCASE("detuned, unequal rates") {
    std::mt19937_64 rng(79);
    for (int trial = 0; trial < 20; ++trial) {
      const auto model = build_refrigerator(
          QubitSpec(uniform(rng, 0.5, 1.5), uniform(rng, 0.5, 2), uniform(rng, 0.05, 0.5)),
          QubitSpec(uniform(rng, 1.5, 3.0), uniform(rng, 0.2, 1), uniform(rng, 0.05, 0.5)),
          QubitSpec(uniform(rng, 0.5, 1.5), uniform(rng, 0.05, 0.3), uniform(rng, 0.05, 0.5)),
          uniform(rng, 0.001, 0.1));
      const auto cf = closed_form_refrigerator(model);
      const auto& c = cf.coefficients;
      CHECK(std::abs(c.m + c.d / c.q_r * c.detuning) <= 1e-15);
      // a_i alternates sign with the qubit's excitation in the exchange.
      CHECK(c.a[0] * c.a[1] <= 0);
      CHECK(c.a[0] * c.a[2] >= 0);
      CHECK((cf.state.rho - exact_steady_state(model).rho).norm() <= 1e-10);

      const auto projected = project_refrigerator_coefficients(model, exact_steady_state(model).rho);
      CHECK(std::abs(projected.a[2] - c.a[2]) <= 1e-12);
      CHECK(std::abs(projected.c - c.c) <= 1e-12);
    }
  }

  SUBCASE("the total-rate pair denominator only disturbs b_ij and c") {
    const auto model = build_refrigerator(QubitSpec::from_temperature(1.0, 1.0, 0.1),
                                          QubitSpec::from_temperature(2.0, 2.0, 0.2),
                                          QubitSpec::from_temperature(1.0, 10.0, 0.3), 0.05);
    const auto fixed = refrigerator_coefficients(model, PairDenominator::pair_rate);
    const auto total = refrigerator_coefficients(model, PairDenominator::total_rate);
    const auto truth = project_refrigerator_coefficients(model, exact_steady_state(model).rho);
    CHECK(total.d == fixed.d);
    CHECK(total.a == fixed.a);
    CHECK(std::abs(fixed.b12 - truth.b12) <= 1e-12);
    CHECK(std::abs(total.b12 - truth.b12) > 1e-6);
    CHECK(total.b12 * (0.1 + 0.2 + 0.3) == doctest::Approx(fixed.b12 * (0.1 + 0.2)));
  }

  SUBCASE("first-order slope by finite differences") {
    const double h = 1e-4;
    const auto model = default_refrigerator(h);
    const Eigen::MatrixXcd rho0 = exact_steady_state(default_refrigerator(0)).rho;
    const Eigen::MatrixXcd rho_half = exact_steady_state(default_refrigerator(h / 2)).rho;
    const Eigen::MatrixXcd rho_full = exact_steady_state(model).rho;
    const Eigen::MatrixXcd slope = (4 * rho_half - rho_full - 3 * rho0) / h;
    const auto c = refrigerator_coefficients(model);
    CHECK(c.d1 == doctest::Approx(-c.q_r * c.delta_s / (c.q_r * c.q_r)));
    const Eigen::MatrixXcd first = c.m1 * refrigerator_exchange() + c.d1 * refrigerator_coherence();
    CHECK((slope - first).norm() <= 1e-6);
  }
}

TEST_CASE("time evolution") {
  SUBCASE("starting at the steady state returns immediately") {
    const auto model = default_two_qubit();
    const auto exact = exact_steady_state(model);
    const auto evolved = evolve_to_steady(model, exact.rho);
    CHECK(evolved.diagnostics.iterations == 0);
    CHECK((evolved.rho - exact.rho).norm() <= 1e-14);
  }

  SUBCASE("maximally mixed start converges to the exact state") {
    const auto model = default_two_qubit();
    const auto evolved =
        evolve_to_steady(model, Eigen::MatrixXcd::Identity(4, 4) / 4.0);
    CHECK(evolved.method == Method::evolved);
    CHECK(evolved.residual <= 1e-9);
    CHECK((evolved.rho - exact_steady_state(model).rho).norm() <= 1e-8);
    CHECK(evolved.diagnostics.trace_drift <= 1e-9);
    CHECK(evolved.diagnostics.iterations > 0);
  }

  SUBCASE("errors") {
    const auto model = default_two_qubit();
    const Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Identity(4, 4) / 4.0;
    EvolveOptions short_run;
    short_run.t_max = 1.0;
    CHECK_THROWS_AS(evolve_to_steady(model, mixed, short_run), NotConverged);
    EvolveOptions unstable;
    unstable.dt = 5.0;
    CHECK_THROWS_AS(evolve_to_steady(model, mixed, unstable), std::invalid_argument);
    CHECK_THROWS_AS(evolve_to_steady(model, Eigen::MatrixXcd::Identity(4, 4), {}),
                    std::invalid_argument);
  }

  CHECK(default_time_step(default_refrigerator()) == doctest::Approx(0.05));
  CHECK(default_time_step(default_two_qubit()) == doctest::Approx(0.1));
}

TEST_CASE("truncation error scan") {
  const auto model = build_two_qubit(QubitSpec(1.0, 1.0, 1.0), QubitSpec(1.0, 0.5, 1.0), 0.1);
  const std::vector<double> gs{0.2, 0.1, 0.05, 0.025};

  const auto k1 = truncation_error_scan(model, 1, gs);
  CHECK(k1.slope == doctest::Approx(2.0).epsilon(0.05));
  // Halving g cuts the O(g^2) remainder by about four.
  CHECK(k1.errors[2] / k1.errors[3] == doctest::Approx(4.0).epsilon(0.05));
  const auto k3 = truncation_error_scan(model, 3, gs);
  CHECK(k3.slope >= 3 + 1 - 0.2);

  const std::vector<double> zero{0.0};
  CHECK(truncation_error_scan(model, 2, zero).errors[0] <= 1e-15);

  CHECK(log_log_slope({1, 2, 4}, {1, 8, 64}) == doctest::Approx(3.0));
}
