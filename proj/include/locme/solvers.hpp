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

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "locme/model.hpp"
#include "locme/operator_algebra.hpp"

namespace locme {

enum class Method { exact, perturbative, closed_form, evolved };

std::string to_string(Method method);

struct SolverDiagnostics {
  double degeneracy_margin = std::numeric_limits<double>::quiet_NaN();
  double discarded = 0;  ///< anti-Hermitian norm removed by symmetrization
  long iterations = 0;
  double trace_drift = 0;
  /// |g^2 x| (two-qubit) or an empirical estimate; NaN when unknown.
  double convergence_ratio = std::numeric_limits<double>::quiet_NaN();
  bool outside_convergence = false;
};

struct SteadyStateResult {
  Eigen::MatrixXcd rho;
  Method method = Method::exact;
  int order = -1;        ///< truncation order for perturbative results
  double residual = 0;   ///< ||L(rho)||_F with the full generator
  SolverDiagnostics diagnostics;

  /// "exact", "perturbative(3)", ...
  std::string label() const;
};

/// Kernel of the full Liouvillian.
SteadyStateResult exact_steady_state(const SystemModel& model, const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// Order-by-order recurrence
// ---------------------------------------------------------------------------

/// rho_s = sum_k g^k rho^(k), with rho^(0) the product of local thermal states and
/// L0(rho^(k+1)) = i[X, rho^(k)] on the traceless subspace.
struct PerturbativeSeries {
  std::vector<Eigen::MatrixXcd> terms;
  double coupling = 0;
  double convergence_ratio = std::numeric_limits<double>::quiet_NaN();
  double discarded = 0;  ///< largest symmetrization discard over all orders

  int order() const noexcept { return static_cast<int>(terms.size()) - 1; }
  Eigen::MatrixXcd partial_sum(int max_order) const { return partial_sum(max_order, coupling); }
  Eigen::MatrixXcd partial_sum(int max_order, double g) const;
};

PerturbativeSeries perturbative_series(const SystemModel& model, int max_order,
                                       const Tolerances& tol = {});

SteadyStateResult perturbative_steady_state(const SystemModel& model, int max_order,
                                            const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// rho_s = tau1 (x) tau2 + a1 s1z + a2 s2z + b s1z s2z + m X + d Y
struct TwoQubitCoefficients {
  double d = 0, m = 0, a1 = 0, a2 = 0, b = 0;
  double x = 0;  ///< ratio between successive odd (and even) orders, always <= 0
  double d1 = 0, m1 = 0;
  double q = 0, delta_s = 0, detuning = 0;
};

struct TwoQubitClosedForm {
  SteadyStateResult state;
  TwoQubitCoefficients coefficients;
};

TwoQubitCoefficients two_qubit_coefficients(const SystemModel& model);
Eigen::MatrixXcd assemble_two_qubit_state(const SystemModel& model, const TwoQubitCoefficients& c);
/// Throws std::invalid_argument unless the model is the built-in two-qubit kind.
TwoQubitClosedForm closed_form_two_qubit(const SystemModel& model);
/// Hilbert-Schmidt projections of rho - tau1 (x) tau2 onto the ansatz operators;
/// x, q, delta_s and detuning are filled from the model.
TwoQubitCoefficients project_two_qubit_coefficients(const SystemModel& model,
                                                    const Eigen::MatrixXcd& rho);

/// Denominator of the pair coefficients b_ij.
enum class PairDenominator {
  pair_rate,   ///< p_i + p_j, the decay rate of s_iz s_jz; agrees with the exact solver
  total_rate,  ///< q_r = p1 + p2 + p3 for every pair
};

/// Pair quantities are ordered (1,2), (2,3), (3,1).
struct RefrigeratorCoefficients {
  double d = 0, m = 0;
  std::array<double, 3> a{};
  double b12 = 0, b23 = 0, b31 = 0;
  double c = 0;
  double d1 = 0, m1 = 0;
  double q_r = 0, delta_s = 0, detuning = 0;
  std::array<double, 3> q_single{};
  std::array<double, 3> q_pair{};
  std::array<double, 3> omega{};
};

struct RefrigeratorClosedForm {
  SteadyStateResult state;
  RefrigeratorCoefficients coefficients;
};

RefrigeratorCoefficients refrigerator_coefficients(
    const SystemModel& model, PairDenominator pairs = PairDenominator::pair_rate);
Eigen::MatrixXcd assemble_refrigerator_state(const SystemModel& model,
                                             const RefrigeratorCoefficients& c);
RefrigeratorClosedForm closed_form_refrigerator(
    const SystemModel& model, PairDenominator pairs = PairDenominator::pair_rate);
RefrigeratorCoefficients project_refrigerator_coefficients(const SystemModel& model,
                                                           const Eigen::MatrixXcd& rho);

// ---------------------------------------------------------------------------
// Time evolution
// ---------------------------------------------------------------------------

struct EvolveOptions {
  double dt = 0;  ///< 0 selects default_time_step(model)
  double t_max = 1e4;
  double tol = 1e-9;
};

/// 0.1 / max(sum_i p_i, max_i E_i)
double default_time_step(const SystemModel& model);

/// Classical RK4 on d rho/dt = L(rho) until ||L(rho)|| <= tol. The trace is
/// renormalized after every step and the largest drift is recorded.
/// Throws NotConverged when t_max is reached.
SteadyStateResult evolve_to_steady(const SystemModel& model, const Eigen::MatrixXcd& rho0,
                                   const EvolveOptions& options = {});

// ---------------------------------------------------------------------------
// Truncation error
// ---------------------------------------------------------------------------

struct TruncationScan {
  int order = 0;
  std::vector<double> couplings;
  std::vector<double> errors;  ///< ||rho_exact(g) - partial_sum_K(g)||_F
  std::vector<double> ratios;  ///< convergence ratio at each g
  double slope = std::numeric_limits<double>::quiet_NaN();  ///< log-log fit over g > 0
};

TruncationScan truncation_error_scan(const SystemModel& model, int max_order,
                                     const std::vector<double>& couplings,
                                     const Tolerances& tol = {});

/// Least-squares slope of log(y) against log(x), skipping non-positive entries.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace locme
