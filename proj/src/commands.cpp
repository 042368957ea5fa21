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

#include "locme/commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "locme/errors.hpp"

namespace locme {

namespace {

using json = nlohmann::ordered_json;

std::map<std::string, double> coefficient_map(const SystemModel& model,
                                              const Eigen::MatrixXcd& rho) {
  std::map<std::string, double> out;
  if (model.kind() == ModelKind::two_qubit) {
    const auto c = project_two_qubit_coefficients(model, rho);
    out = {{"d", c.d}, {"m", c.m}, {"a1", c.a1}, {"a2", c.a2}, {"b12", c.b}};
  } else if (model.kind() == ModelKind::refrigerator) {
    const auto c = project_refrigerator_coefficients(model, rho);
    out = {{"d", c.d},     {"m", c.m},     {"a1", c.a[0]},   {"a2", c.a[1]}, {"a3", c.a[2]},
           {"b12", c.b12}, {"b23", c.b23}, {"b31", c.b31}, {"c", c.c}};
  }
  return out;
}

std::string method_list(const std::vector<Method>& methods) {
  std::string s;
  for (Method m : methods) s += (s.empty() ? "" : ",") + to_string(m);
  return s;
}

std::string fmt(double v) { return format_number(v); }

}  // namespace

void apply_overrides(Scenario& s, const Overrides& o) {
  if (o.output) s.output_path = *o.output;
  if (o.format) s.format = *o.format;
  if (o.seed) s.seed = *o.seed;
  if (o.tol) {
    if (!(*o.tol > 0) || !std::isfinite(*o.tol)) throw ConfigError("--tol: must be positive");
    s.tol.failure = *o.tol;
  }
  if (o.order) {
    if (*o.order < 0) throw ConfigError("--order: must be >= 0");
    s.order = *o.order;
  }
  if (o.methods) s.methods = *o.methods;
  validate_scenario(s);
}

std::string describe_point(const ParameterPoint& p) {
  std::string s;
  const auto add = [&](const std::string& name, double v) {
    s += (s.empty() ? "" : ", ") + name + "=" + fmt(v);
  };
  for (std::size_t i = 0; i < p.energy.size(); ++i) add("E" + std::to_string(i + 1), p.energy[i]);
  for (std::size_t i = 0; i < p.beta.size(); ++i) add("beta" + std::to_string(i + 1), p.beta[i]);
  for (std::size_t i = 0; i < p.rate.size(); ++i) add("p" + std::to_string(i + 1), p.rate[i]);
  add("g", p.g);
  return s;
}

SteadyStateResult solve_with(const SystemModel& model, Method method, const Scenario& s) {
  switch (method) {
    case Method::exact:
      return exact_steady_state(model, s.tol);
    case Method::perturbative:
      return perturbative_steady_state(model, s.order, s.tol);
    case Method::closed_form:
      if (model.kind() == ModelKind::two_qubit) return closed_form_two_qubit(model).state;
      if (model.kind() == ModelKind::refrigerator) return closed_form_refrigerator(model).state;
      throw std::invalid_argument("closed_form needs a two_qubit or refrigerator model");
    case Method::evolved: {
      const auto dim = model.dim();
      const Eigen::MatrixXcd mixed =
          Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);
      return evolve_to_steady(model, mixed, s.evolve);
    }
  }
  throw std::invalid_argument("unknown method");
}

PointRecord make_record(const Scenario& s, std::size_t index, const ParameterPoint& point,
                        Method method) {
  const SystemModel model = s.model_at(point);
  PointRecord rec;
  rec.point = index;
  rec.kind = s.kind;
  rec.params = point;
  rec.result = solve_with(model, method, s);
  rec.coefficients = coefficient_map(model, rec.result.rho);
  AuditOptions audit;
  audit.tol = s.tol;
  audit.hamiltonian = s.current;
  rec.thermo = thermo_report(model, rec.result.rho, audit);
  return rec;
}

std::vector<PointRecord> solve_points(const Scenario& s, const std::vector<ParameterPoint>& points,
                                      unsigned threads) {
  const std::size_t n = points.size();
  std::vector<std::vector<PointRecord>> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::string> failed_method(n);

  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      Method current = s.methods.front();
      try {
        for (Method m : s.methods) {
          current = m;
          results[i].push_back(make_record(s, i, points[i], m));
        }
      } catch (...) {
        errors[i] = std::current_exception();
        failed_method[i] = to_string(current);
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  std::vector<PointRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) {
      std::string what;
      try {
        std::rethrow_exception(errors[i]);
      } catch (const std::exception& e) {
        what = e.what();
      }
      throw PointFailure(i, "point " + std::to_string(i) + " (" + describe_point(points[i]) +
                                "), method " + failed_method[i] + ": " + what);
    }
    for (auto& r : results[i]) out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::vector<double>> agreement_matrix(const std::vector<PointRecord>& records) {
  const std::size_t n = records.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      d[i][j] = (records[i].result.rho - records[j].result.rho).norm();
    }
  }
  return d;
}

std::vector<VerifyCheck> verification_suite(const Scenario& s) {
  const SystemModel model = s.base_model();
  const std::string name = to_string(model.kind());
  std::vector<VerifyCheck> checks;
  const auto check = [&](const std::string& what, double value, double tol) {
    checks.push_back({name, what, value, tol, value <= tol, false});
  };
  const auto info = [&](const std::string& what, double value, double tol) {
    checks.push_back({name, what, value, tol, value <= tol, true});
  };

  const SteadyStateResult exact = exact_steady_state(model, s.tol);
  const auto& rho = exact.rho;
  check("exact.residual", exact.residual, s.tol.failure);
  check("exact.trace_error", std::abs(rho.trace() - 1.0), s.tol.trace);
  check("exact.hermiticity", (rho - rho.adjoint()).norm(), 1e-12);
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho, Eigen::EigenvaluesOnly);
    check("exact.negativity", std::max(0.0, -eig.eigenvalues().minCoeff()), s.tol.positivity);
  }

  const SteadyStateResult evolved = solve_with(model, Method::evolved, s);
  check("evolved.distance", (evolved.rho - rho).norm(), 1e-6);

  if (s.order >= 1) {
    const SteadyStateResult pert = perturbative_steady_state(model, s.order, s.tol);
    info("perturbative(" + std::to_string(s.order) + ").distance", (pert.rho - rho).norm(),
         pert.diagnostics.convergence_ratio);
  }

  AuditOptions audit;
  audit.tol = s.tol;
  audit.hamiltonian = s.current;
  const ThermoReport report = thermo_report(model, rho, audit);
  check("first_law.sum_Q", report.first_law_residual, audit.first_law_tol);

  const auto detuning = model.detuning();
  if (detuning && *detuning == 0.0) {
    check("second_law.entropy_rate", std::max(0.0, -report.entropy_rate), audit.second_law_tol);
  } else {
    info("second_law.entropy_rate", std::max(0.0, -report.entropy_rate), audit.second_law_tol);
  }

  if (model.kind() == ModelKind::custom) return checks;

  const double g = model.coupling();
  double d = 0;
  if (model.kind() == ModelKind::two_qubit) {
    const auto closed = closed_form_two_qubit(model);
    d = closed.coefficients.d;
    check("closed_form.distance", (closed.state.rho - rho).norm(), 1e-8);

    const PerturbativeSeries series = perturbative_series(model, 3, s.tol);
    const double x = closed.coefficients.x;
    check("series.rho3_minus_x_rho1",
          (series.terms[3] - x * series.terms[1]).cwiseAbs().maxCoeff(), 1e-10);
  } else {
    const auto projected = project_refrigerator_coefficients(model, rho);
    d = projected.d;
    for (auto [convention, label, informational] :
         {std::tuple{PairDenominator::pair_rate, "pair_rate", false},
          std::tuple{PairDenominator::total_rate, "total_rate", true}}) {
      const auto closed = closed_form_refrigerator(model, convention);
      const auto& c = closed.coefficients;
      const std::string prefix = std::string("closed_form[") + label + "]";
      const auto row = [&](const std::string& what, double value, double tol) {
        if (informational) {
          info(what, value, tol);
        } else {
          check(what, value, tol);
        }
      };
      row(prefix + ".distance", (closed.state.rho - rho).norm(), 1e-8);
      const std::vector<std::pair<std::string, double>> deviations{
          {"d", c.d - projected.d},       {"m", c.m - projected.m},
          {"a1", c.a[0] - projected.a[0]}, {"a2", c.a[1] - projected.a[1]},
          {"a3", c.a[2] - projected.a[2]}, {"b12", c.b12 - projected.b12},
          {"b23", c.b23 - projected.b23}, {"b31", c.b31 - projected.b31},
          {"c", c.c - projected.c}};
      for (const auto& [coef, dev] : deviations) row(prefix + "." + coef, std::abs(dev), 1e-8);
    }
    info("cooling.Q1_negated", -report.heat[0], 0.0);
  }

  const CurrentFormula formula = current_formula(model, d);
  double heat_dev = 0, inter_dev = 0;
  for (std::size_t i = 0; i < formula.heat.size(); ++i) {
    heat_dev = std::max(heat_dev, std::abs(formula.heat[i] - report.heat[i]));
    inter_dev = std::max(inter_dev, std::abs(formula.interaction[i] - report.interaction[i]));
  }
  if (s.current == CurrentHamiltonian::full) check("current_formula.Q", heat_dev, 1e-10);
  check("current_formula.Qg", inter_dev, 1e-10);
  check("first_law.sum_Qg_vs_2gd_detuning",
        std::abs(report.first_law_g_residual - std::abs(2 * g * d * detuning.value_or(0.0))),
        1e-10);
  return checks;
}

CommandOutput command_solve(const Scenario& s) {
  CommandOutput out;
  const auto records = solve_points(s, {s.base}, 1);
  const std::size_t nq = s.base.energy.size();
  if (s.format == OutputFormat::csv) {
    std::string csv = csv_header(nq);
    for (const auto& r : records) csv += csv_row(r, nq);
    out.files.emplace_back("steady_state.csv", csv);
    if (s.emit_states) out.files.emplace_back("states.json", states_json(records));
  } else {
    out.files.emplace_back("steady_state.json", records_json(records, s.emit_states));
  }

  std::ostringstream summary;
  summary << "model " << to_string(s.kind) << ": " << describe_point(s.base) << "\n";
  for (const auto& r : records) {
    summary << "  " << r.result.label() << ": residual " << fmt(r.result.residual) << ", verdict "
            << r.thermo.verdict;
    if (r.result.diagnostics.outside_convergence) summary << " (outside convergence radius)";
    summary << "\n";
  }

  if (records.size() > 1) {
    const auto d = agreement_matrix(records);
    std::string csv = "method";
    for (const auto& r : records) csv += "," + r.result.label();
    csv += "\n";
    summary << "agreement (Frobenius distance):\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
      csv += records[i].result.label();
      summary << "  " << records[i].result.label() << ":";
      for (std::size_t j = 0; j < records.size(); ++j) {
        csv += "," + fmt(d[i][j]);
        char buf[32];
        std::snprintf(buf, sizeof buf, " %.3e", d[i][j]);
        summary << buf;
      }
      csv += "\n";
      summary << "\n";
    }
    out.files.emplace_back("agreement.csv", csv);
  }
  out.summary = summary.str();
  return out;
}

CommandOutput command_sweep(const Scenario& s, unsigned threads) {
  CommandOutput out;
  const auto points = s.sweep_points();
  const auto records = solve_points(s, points, threads);
  const std::size_t nq = s.base.energy.size();
  if (s.format == OutputFormat::csv) {
    std::string csv = csv_header(nq);
    for (const auto& r : records) csv += csv_row(r, nq);
    out.files.emplace_back("sweep.csv", csv);
    if (s.emit_states) out.files.emplace_back("states.json", states_json(records));
  } else {
    out.files.emplace_back("sweep.json", records_json(records, s.emit_states));
  }
  std::size_t violations = 0, outside = 0;
  for (const auto& r : records) {
    if (r.thermo.verdict != "consistent") ++violations;
    if (r.result.diagnostics.outside_convergence) ++outside;
  }
  std::ostringstream summary;
  summary << "swept " << points.size() << " points x " << s.methods.size() << " method(s) ["
          << method_list(s.methods) << "]: " << violations << " inconsistent row(s)";
  if (outside > 0) summary << ", " << outside << " outside the series convergence radius";
  summary << "\n";
  out.summary = summary.str();
  return out;
}

CommandOutput command_series(const Scenario& s) {
  CommandOutput out;
  const SystemModel model = s.base_model();
  const int order = std::max(s.order, 1);
  const PerturbativeSeries series = perturbative_series(model, order, s.tol);
  std::optional<double> expected_x;
  if (model.kind() == ModelKind::two_qubit) expected_x = two_qubit_coefficients(model).x;

  json terms = json::array();
  std::string terms_csv = "k,norm,trace,ratio_to_k_minus_2,ratio_residual,expected_x\n";
  for (int k = 0; k <= order; ++k) {
    const Eigen::MatrixXcd& t = series.terms[static_cast<std::size_t>(k)];
    std::string ratio, residual;
    json row = {{"k", k}, {"norm", t.norm()}, {"trace", t.trace().real()}};
    if (k >= 2) {
      const Eigen::MatrixXcd& prev = series.terms[static_cast<std::size_t>(k - 2)];
      const double denom = prev.squaredNorm();
      if (denom > 0) {
        const double r = (prev.adjoint() * t).trace().real() / denom;
        const double res = (t - r * prev).norm() / std::max(t.norm(), 1e-300);
        ratio = fmt(r);
        residual = fmt(res);
        row["ratio_to_k_minus_2"] = r;
        row["ratio_residual"] = res;
      }
    }
    terms_csv += std::to_string(k) + "," + fmt(t.norm()) + "," + fmt(t.trace().real()) + "," +
                 ratio + "," + residual + "," + (expected_x ? fmt(*expected_x) : "") + "\n";
    if (expected_x) row["expected_x"] = *expected_x;
    if (s.emit_states || s.format == OutputFormat::json) row["term"] = json::parse(state_json(t));
    terms.push_back(std::move(row));
  }

  json scans = json::array();
  std::string trunc_csv = "order,g,error,convergence_ratio,slope\n";
  std::ostringstream summary;
  summary << "series to order " << order << " for " << to_string(model.kind()) << "\n";
  for (int k = 1; k <= order; ++k) {
    const TruncationScan scan = truncation_error_scan(model, k, s.series_couplings, s.tol);
    for (std::size_t i = 0; i < scan.couplings.size(); ++i) {
      trunc_csv += std::to_string(k) + "," + fmt(scan.couplings[i]) + "," + fmt(scan.errors[i]) +
                   "," + fmt(scan.ratios[i]) + "," + fmt(scan.slope) + "\n";
    }
    scans.push_back({{"order", k},
                     {"couplings", scan.couplings},
                     {"errors", scan.errors},
                     {"ratios", scan.ratios},
                     {"slope", std::isfinite(scan.slope) ? json(scan.slope) : json(nullptr)}});
    summary << "  K=" << k << ": log-log slope " << fmt(scan.slope) << "\n";
  }
  if (expected_x) summary << "  x = " << fmt(*expected_x) << "\n";

  if (s.format == OutputFormat::csv) {
    out.files.emplace_back("series_terms.csv", terms_csv);
    out.files.emplace_back("truncation.csv", trunc_csv);
    if (s.emit_states) {
      out.files.emplace_back("series_terms.json",
                             json({{"schema", kJsonSchema}, {"terms", terms}}).dump(2) + "\n");
    }
  } else {
    out.files.emplace_back(
        "series.json",
        json({{"schema", kJsonSchema}, {"terms", terms}, {"truncation", scans}}).dump(2) + "\n");
  }
  out.summary = summary.str();
  return out;
}

CommandOutput command_verify(const std::vector<Scenario>& scenarios) {
  CommandOutput out;
  std::vector<VerifyCheck> all;
  for (const auto& s : scenarios) {
    auto checks = verification_suite(s);
    all.insert(all.end(), checks.begin(), checks.end());
  }
  std::string csv = "model,check,value,tolerance,status\n";
  json rows = json::array();
  std::ostringstream summary;
  std::size_t failures = 0;
  for (const auto& c : all) {
    const std::string status = c.informational ? "info" : (c.pass ? "pass" : "fail");
    if (!c.informational && !c.pass) ++failures;
    csv += c.model + "," + c.name + "," + fmt(c.value) + "," + fmt(c.tolerance) + "," + status + "\n";
    rows.push_back({{"model", c.model},
                    {"check", c.name},
                    {"value", c.value},
                    {"tolerance", c.tolerance},
                    {"status", status}});
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e <= %.1e", c.value, c.tolerance);
    summary << (status == "pass" ? "PASS " : status == "fail" ? "FAIL " : "info ") << c.model
            << " " << c.name << ": " << buf << "\n";
  }
  summary << (failures == 0 ? "verify: all checks passed\n"
                            : "verify: " + std::to_string(failures) + " check(s) failed\n");
  const OutputFormat format = scenarios.empty() ? OutputFormat::csv : scenarios.front().format;
  if (format == OutputFormat::csv) {
    out.files.emplace_back("verify.csv", csv);
  } else {
    out.files.emplace_back("verify.json",
                           json({{"schema", kJsonSchema}, {"checks", rows}}).dump(2) + "\n");
  }
  out.summary = summary.str();
  out.exit_code = failures == 0 ? exit_ok : exit_verification;
  return out;
}

void write_output(const std::string& directory, const CommandOutput& output) {
  std::filesystem::create_directories(directory);
  for (const auto& [name, contents] : output.files) {
    const auto path = std::filesystem::path(directory) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << contents;
  }
}

}  // namespace locme
