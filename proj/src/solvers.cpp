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

#include "locme/solvers.hpp"

#include <cmath>
#include <stdexcept>

namespace locme {

namespace {

constexpr std::complex<double> kI(0, 1);

double project(const Eigen::MatrixXcd& delta, const Eigen::MatrixXcd& op) {
  return (op.adjoint() * delta).trace().real() / (op.adjoint() * op).trace().real();
}

void require_kind(const SystemModel& model, ModelKind kind, const char* who) {
  if (model.kind() != kind) {
    throw std::invalid_argument(std::string(who) + ": requires a " + to_string(kind) +
                                " model, got " + to_string(model.kind()));
  }
}

double residual_of(const Liouvillian& L, const Eigen::MatrixXcd& rho) {
  return L.apply(rho).norm();
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::exact: return "exact";
    case Method::perturbative: return "perturbative";
    case Method::closed_form: return "closed_form";
    case Method::evolved: return "evolved";
  }
  return "unknown";
}

std::string SteadyStateResult::label() const {
  if (method == Method::perturbative) return "perturbative(" + std::to_string(order) + ")";
  return to_string(method);
}

SteadyStateResult exact_steady_state(const SystemModel& model, const Tolerances& tol) {
  const auto kernel = nullspace_density_matrix(liouvillian(model), tol);
  SteadyStateResult out;
  out.rho = kernel.rho;
  out.method = Method::exact;
  out.residual = kernel.residual;
  out.diagnostics.degeneracy_margin = kernel.degeneracy_margin;
  out.diagnostics.discarded = kernel.discarded;
  return out;
}

// ---------------------------------------------------------------------------

Eigen::MatrixXcd PerturbativeSeries::partial_sum(int max_order, double g) const {
  if (max_order < 0 || max_order > order()) {
    throw std::out_of_range("PerturbativeSeries::partial_sum: order " + std::to_string(max_order) +
                            " not available");
  }
  Eigen::MatrixXcd sum = terms[0];
  double power = 1;
  for (int k = 1; k <= max_order; ++k) {
    power *= g;
    sum += power * terms[static_cast<std::size_t>(k)];
  }
  return sum;
}

PerturbativeSeries perturbative_series(const SystemModel& model, int max_order,
                                       const Tolerances& tol) {
  if (max_order < 0) throw std::invalid_argument("perturbative_series: negative order");
  PerturbativeSeries series;
  series.coupling = model.coupling();
  series.terms.push_back(model.product_thermal_state());
  if (max_order > 0) {
    const TracelessSolver<double> solver(zeroth_order_liouvillian(model), tol);
    const Eigen::MatrixXcd& x = model.interaction();
    for (int k = 0; k < max_order; ++k) {
      const Eigen::MatrixXcd rhs = kI * commutator(x, series.terms.back());
      double discarded = 0;
      series.terms.push_back(solver.solve(rhs, &discarded));
      series.discarded = std::max(series.discarded, discarded);
    }
  }

  const double g2 = model.coupling() * model.coupling();
  if (model.kind() == ModelKind::two_qubit) {
    series.convergence_ratio = std::abs(g2 * two_qubit_coefficients(model).x);
  } else if (series.order() >= 3) {
    const double first = series.terms[1].norm();
    series.convergence_ratio = first > 0 ? series.terms[3].norm() / first * g2 : 0.0;
  }
  return series;
}

SteadyStateResult perturbative_steady_state(const SystemModel& model, int max_order,
                                            const Tolerances& tol) {
  const PerturbativeSeries series = perturbative_series(model, max_order, tol);
  SteadyStateResult out;
  out.rho = series.partial_sum(max_order);
  out.method = Method::perturbative;
  out.order = max_order;
  out.residual = residual_of(liouvillian(model), out.rho);
  out.diagnostics.discarded = series.discarded;
  out.diagnostics.convergence_ratio = series.convergence_ratio;
  out.diagnostics.outside_convergence = series.convergence_ratio >= 1;
  return out;
}

// ---------------------------------------------------------------------------
// Two-qubit closed form

TwoQubitCoefficients two_qubit_coefficients(const SystemModel& model) {
  require_kind(model, ModelKind::two_qubit, "two_qubit_coefficients");
  const QubitSpec& q1 = model.qubit(0);
  const QubitSpec& q2 = model.qubit(1);
  const double p1 = q1.rate(), p2 = q2.rate();
  const double s1 = q1.polarization(), s2 = q2.polarization();
  const double g = model.coupling();

  TwoQubitCoefficients c;
  c.q = p1 + p2;
  c.detuning = q1.energy() - q2.energy();
  c.delta_s = (s1 - s2) / 2;
  const double q2_plus_de2 = c.q * c.q + c.detuning * c.detuning;
  c.d1 = -c.q * c.delta_s / q2_plus_de2;
  c.m1 = -c.detuning / c.q * c.d1;
  c.x = -2 * c.q * c.q / (q2_plus_de2 * p1 * p2);

  c.d = g / (1 - g * g * c.x) * c.d1;
  c.m = -c.detuning / c.q * c.d;
  c.a1 = g / p1 * c.d;
  c.a2 = -g / p2 * c.d;
  c.b = (p2 * s2 * c.a1 + p1 * s1 * c.a2) / c.q;
  return c;
}

Eigen::MatrixXcd assemble_two_qubit_state(const SystemModel& model, const TwoQubitCoefficients& c) {
  require_kind(model, ModelKind::two_qubit, "assemble_two_qubit_state");
  const Eigen::MatrixXcd z1 = pauli(Pauli::z, 0, 2);
  const Eigen::MatrixXcd z2 = pauli(Pauli::z, 1, 2);
  return model.product_thermal_state() + c.a1 * z1 + c.a2 * z2 + c.b * z1 * z2 +
         c.m * two_qubit_exchange() + c.d * two_qubit_coherence();
}

TwoQubitClosedForm closed_form_two_qubit(const SystemModel& model) {
  TwoQubitClosedForm out;
  out.coefficients = two_qubit_coefficients(model);
  out.state.rho = assemble_two_qubit_state(model, out.coefficients);
  out.state.method = Method::closed_form;
  out.state.residual = residual_of(liouvillian(model), out.state.rho);
  const double g = model.coupling();
  out.state.diagnostics.convergence_ratio = std::abs(g * g * out.coefficients.x);
  out.state.diagnostics.outside_convergence = out.state.diagnostics.convergence_ratio >= 1;
  return out;
}

TwoQubitCoefficients project_two_qubit_coefficients(const SystemModel& model,
                                                    const Eigen::MatrixXcd& rho) {
  TwoQubitCoefficients c = two_qubit_coefficients(model);
  const Eigen::MatrixXcd delta = rho - model.product_thermal_state();
  const Eigen::MatrixXcd z1 = pauli(Pauli::z, 0, 2);
  const Eigen::MatrixXcd z2 = pauli(Pauli::z, 1, 2);
  c.d = project(delta, two_qubit_coherence());
  c.m = project(delta, two_qubit_exchange());
  c.a1 = project(delta, z1);
  c.a2 = project(delta, z2);
  c.b = project(delta, z1 * z2);
  return c;
}

// ---------------------------------------------------------------------------
// Refrigerator closed form

RefrigeratorCoefficients refrigerator_coefficients(const SystemModel& model,
                                                   PairDenominator pairs) {
  require_kind(model, ModelKind::refrigerator, "refrigerator_coefficients");
  std::array<double, 3> p{}, s{}, r{}, rbar{};
  for (int i = 0; i < 3; ++i) {
    p[i] = model.qubit(i).rate();
    s[i] = model.qubit(i).polarization();
    r[i] = model.qubit(i).excited_population();
    rbar[i] = model.qubit(i).ground_population();
  }
  const double g = model.coupling();

  RefrigeratorCoefficients c;
  c.q_r = p[0] + p[1] + p[2];
  c.detuning = *model.detuning();
  c.delta_s = r[0] * rbar[1] * r[2] - rbar[0] * r[1] * rbar[2];

  const double base = c.q_r * c.q_r + c.detuning * c.detuning;
  c.d1 = -c.q_r * c.delta_s / base;
  c.m1 = -c.detuning / c.q_r * c.d1;

  for (int i = 0; i < 3; ++i) c.q_single[i] = p[i] / (c.q_r - p[i]);
  // Qubit 2 enters the exchange with the opposite excitation, so its
  // populations swap roles in the pair weights.
  const std::array<double, 3> rp{r[0], rbar[1], r[2]};
  const std::array<double, 3> rbarp{rbar[0], r[1], rbar[2]};
  constexpr std::array<std::array<int, 2>, 3> kPairs{{{0, 1}, {1, 2}, {2, 0}}};
  double pair_sum = 0;
  for (int k = 0; k < 3; ++k) {
    const int i = kPairs[k][0], j = kPairs[k][1];
    c.q_pair[k] = (p[i] * c.q_single[j] + p[j] * c.q_single[i]) / (c.q_r - p[i] - p[j]);
    c.omega[k] = rp[i] * rp[j] + rbarp[i] * rbarp[j];
    pair_sum += c.q_pair[k] * c.omega[k];
  }
  const double single_sum = c.q_single[0] + c.q_single[1] + c.q_single[2];

  c.d = -g * c.q_r * c.delta_s / (base + 4 * g * g + 2 * g * g * (single_sum + pair_sum));
  c.m = -c.d / c.q_r * c.detuning;
  for (int i = 0; i < 3; ++i) c.a[i] = (i % 2 == 0 ? 1.0 : -1.0) * g / (2 * p[i]) * c.d;

  auto pair_coefficient = [&](int i, int j) {
    const double denom = pairs == PairDenominator::pair_rate ? p[i] + p[j] : c.q_r;
    return (p[i] * s[i] * c.a[j] + p[j] * s[j] * c.a[i]) / denom;
  };
  c.b12 = pair_coefficient(0, 1);
  c.b23 = pair_coefficient(1, 2);
  c.b31 = pair_coefficient(2, 0);
  c.c = (p[0] * s[0] * c.b23 + p[1] * s[1] * c.b31 + p[2] * s[2] * c.b12 - 0.5 * g * c.d) / c.q_r;
  return c;
}

Eigen::MatrixXcd assemble_refrigerator_state(const SystemModel& model,
                                             const RefrigeratorCoefficients& c) {
  require_kind(model, ModelKind::refrigerator, "assemble_refrigerator_state");
  std::array<Eigen::MatrixXcd, 3> z;
  for (int i = 0; i < 3; ++i) z[i] = pauli(Pauli::z, i, 3);
  Eigen::MatrixXcd rho = model.product_thermal_state() + c.d * refrigerator_coherence() +
                         c.m * refrigerator_exchange();
  for (int i = 0; i < 3; ++i) rho += c.a[i] * z[i];
  rho += c.b12 * z[0] * z[1] + c.b23 * z[1] * z[2] + c.b31 * z[2] * z[0];
  rho += c.c * z[0] * z[1] * z[2];
  return rho;
}

RefrigeratorClosedForm closed_form_refrigerator(const SystemModel& model, PairDenominator pairs) {
  RefrigeratorClosedForm out;
  out.coefficients = refrigerator_coefficients(model, pairs);
  out.state.rho = assemble_refrigerator_state(model, out.coefficients);
  out.state.method = Method::closed_form;
  out.state.residual = residual_of(liouvillian(model), out.state.rho);
  // No closed-form ratio exists here; estimate it from the third and first orders.
  if (model.coupling() > 0) {
    const PerturbativeSeries series = perturbative_series(model, 3);
    out.state.diagnostics.convergence_ratio = series.convergence_ratio;
    out.state.diagnostics.outside_convergence = series.convergence_ratio >= 1;
  } else {
    out.state.diagnostics.convergence_ratio = 0;
  }
  return out;
}

RefrigeratorCoefficients project_refrigerator_coefficients(const SystemModel& model,
                                                           const Eigen::MatrixXcd& rho) {
  RefrigeratorCoefficients c = refrigerator_coefficients(model);
  const Eigen::MatrixXcd delta = rho - model.product_thermal_state();
  std::array<Eigen::MatrixXcd, 3> z;
  for (int i = 0; i < 3; ++i) z[i] = pauli(Pauli::z, i, 3);
  c.d = project(delta, refrigerator_coherence());
  c.m = project(delta, refrigerator_exchange());
  for (int i = 0; i < 3; ++i) c.a[i] = project(delta, z[i]);
  c.b12 = project(delta, z[0] * z[1]);
  c.b23 = project(delta, z[1] * z[2]);
  c.b31 = project(delta, z[2] * z[0]);
  c.c = project(delta, z[0] * z[1] * z[2]);
  return c;
}

// ---------------------------------------------------------------------------
// Time evolution

double default_time_step(const SystemModel& model) {
  double rate_sum = 0, max_energy = 0;
  for (const auto& q : model.qubits()) {
    rate_sum += q.rate();
    max_energy = std::max(max_energy, q.energy());
  }
  return 0.1 / std::max(rate_sum, max_energy);
}

SteadyStateResult evolve_to_steady(const SystemModel& model, const Eigen::MatrixXcd& rho0,
                                   const EvolveOptions& options) {
  const Index dim = model.dim();
  if (rho0.rows() != dim || rho0.cols() != dim) {
    throw DimensionMismatch("evolve_to_steady: initial state has the wrong dimension");
  }
  if (!is_unit_trace(rho0, 1e-10) || !is_positive_semidefinite(rho0, 1e-10)) {
    throw std::invalid_argument("evolve_to_steady: initial state is not a density matrix");
  }
  const double dt = options.dt > 0 ? options.dt : default_time_step(model);
  if (!(options.t_max > 0) || !(options.tol > 0)) {
    throw std::invalid_argument("evolve_to_steady: t_max and tol must be positive");
  }

  const Liouvillian L = liouvillian(model);
  // Row-sum norm bounds the spectral radius; RK4 is stable for |dt * lambda| below ~2.7.
  const double bound = L.matrix.cwiseAbs().rowwise().sum().maxCoeff();
  if (dt * bound > 2.5) {
    throw std::invalid_argument("evolve_to_steady: dt = " + std::to_string(dt) +
                                " is too large for stable RK4 stepping");
  }

  const Eigen::RowVectorXcd trace = trace_functional<double>(dim);
  Eigen::VectorXcd v = vectorize(rho0);
  Eigen::VectorXcd k1 = L.matrix * v;
  double residual = k1.norm();
  double drift = 0;
  long steps = 0;
  const auto max_steps = static_cast<long>(std::ceil(options.t_max / dt));

  while (residual > options.tol) {
    if (steps >= max_steps) {
      throw NotConverged("evolve_to_steady: residual " + std::to_string(residual) +
                             " after t = " + std::to_string(steps * dt),
                         residual);
    }
    const Eigen::VectorXcd k2 = L.matrix * (v + dt / 2 * k1);
    const Eigen::VectorXcd k3 = L.matrix * (v + dt / 2 * k2);
    const Eigen::VectorXcd k4 = L.matrix * (v + dt * k3);
    v += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    const std::complex<double> tr = trace * v;
    drift = std::max(drift, std::abs(tr - 1.0));
    v /= tr;
    ++steps;
    k1 = L.matrix * v;
    residual = k1.norm();
  }

  SteadyStateResult out;
  double discarded = 0;
  out.rho = hermitian_part(devectorize(v), &discarded);
  out.method = Method::evolved;
  out.residual = residual_of(L, out.rho);
  out.diagnostics.iterations = steps;
  out.diagnostics.trace_drift = drift;
  out.diagnostics.discarded = discarded;
  return out;
}

// ---------------------------------------------------------------------------

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("log_log_slope: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  const double denom = n * sxx - sx * sx;
  if (n < 2 || denom == 0) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / denom;
}

TruncationScan truncation_error_scan(const SystemModel& model, int max_order,
                                     const std::vector<double>& couplings,
                                     const Tolerances& tol) {
  TruncationScan scan;
  scan.order = max_order;
  // The terms do not depend on g; the ratio estimate needs the third order.
  const PerturbativeSeries series = perturbative_series(model, std::max(max_order, 3), tol);
  for (double g : couplings) {
    const SystemModel at_g = model.with_coupling(g);
    const Eigen::MatrixXcd exact = exact_steady_state(at_g, tol).rho;
    scan.couplings.push_back(g);
    scan.errors.push_back((exact - series.partial_sum(max_order, g)).norm());
    if (model.kind() == ModelKind::two_qubit) {
      scan.ratios.push_back(std::abs(g * g * two_qubit_coefficients(at_g).x));
    } else {
      const double first = series.terms[1].norm();
      scan.ratios.push_back(first > 0 ? series.terms[3].norm() / first * g * g : 0.0);
    }
  }
  scan.slope = log_log_slope(scan.couplings, scan.errors);
  return scan;
}

}  // namespace locme
