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

#include "locme/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace locme {

namespace {

using json = nlohmann::ordered_json;

std::size_t width(std::size_t n_qubits) { return std::max<std::size_t>(3, n_qubits); }

std::string cell(bool value) { return value ? "true" : "false"; }

json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

json matrix_json(const Eigen::MatrixXcd& rho) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < rho.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
      row.push_back(json::array({rho(r, c).real(), rho(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return {{"dim", rho.rows()}, {"matrix", std::move(rows)}};
}

double trace_error(const Eigen::MatrixXcd& rho) { return std::abs(rho.trace() - 1.0); }

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  char* end = std::to_chars(buf, buf + sizeof buf, value).ptr;
  return std::string(buf, end);
}

std::vector<std::string> csv_columns(std::size_t n_qubits) {
  const std::size_t n = width(n_qubits);
  std::vector<std::string> cols{"schema", "point", "model", "method", "order", "g"};
  for (const char* prefix : {"E", "beta", "T", "p"}) {
    for (std::size_t i = 1; i <= n; ++i) cols.push_back(prefix + std::to_string(i));
  }
  for (const char* c : {"detuning", "convergence_ratio", "d", "m", "a1", "a2", "a3", "b12", "b23",
                        "b31", "c"}) {
    cols.emplace_back(c);
  }
  for (const char* prefix : {"Q", "Qg"}) {
    for (std::size_t i = 1; i <= n; ++i) cols.push_back(prefix + std::to_string(i));
  }
  for (const char* c : {"entropy_rate", "first_law_residual", "first_law_g_residual",
                        "first_law_ok", "second_law_ok", "cooling", "verdict", "residual",
                        "trace_error", "discarded"}) {
    cols.emplace_back(c);
  }
  return cols;
}

std::string csv_header(std::size_t n_qubits) {
  std::string out;
  for (const auto& c : csv_columns(n_qubits)) out += (out.empty() ? "" : ",") + c;
  return out + "\n";
}

std::string csv_row(const PointRecord& rec, std::size_t n_qubits) {
  const std::size_t n = width(n_qubits);
  const auto& p = rec.params;
  std::vector<std::string> cells{kCsvSchema, std::to_string(rec.point), to_string(rec.kind),
                                 to_string(rec.result.method),
                                 rec.result.order >= 0 ? std::to_string(rec.result.order) : "",
                                 format_number(p.g)};
  const auto per_qubit = [&](const std::vector<double>& v, auto transform) {
    for (std::size_t i = 0; i < n; ++i) {
      cells.push_back(i < v.size() ? format_number(transform(v[i])) : "");
    }
  };
  const auto same = [](double x) { return x; };
  per_qubit(p.energy, same);
  per_qubit(p.beta, same);
  per_qubit(p.beta, [](double b) { return 1.0 / b; });
  per_qubit(p.rate, same);

  cells.push_back(rec.thermo.detuning ? format_number(*rec.thermo.detuning) : "");
  const double ratio = rec.result.diagnostics.convergence_ratio;
  cells.push_back(std::isnan(ratio) ? "" : format_number(ratio));
  for (const char* name : {"d", "m", "a1", "a2", "a3", "b12", "b23", "b31", "c"}) {
    const auto it = rec.coefficients.find(name);
    cells.push_back(it == rec.coefficients.end() ? "" : format_number(it->second));
  }
  per_qubit(rec.thermo.heat, same);
  per_qubit(rec.thermo.interaction, same);

  cells.push_back(format_number(rec.thermo.entropy_rate));
  cells.push_back(format_number(rec.thermo.first_law_residual));
  cells.push_back(format_number(rec.thermo.first_law_g_residual));
  cells.push_back(cell(rec.thermo.first_law_ok));
  cells.push_back(cell(rec.thermo.second_law_ok));
  cells.push_back(rec.thermo.cooling ? cell(*rec.thermo.cooling) : "");
  cells.push_back(rec.thermo.verdict);
  cells.push_back(format_number(rec.result.residual));
  cells.push_back(format_number(trace_error(rec.result.rho)));
  cells.push_back(format_number(rec.result.diagnostics.discarded));

  std::string out;
  for (const auto& c : cells) out += (out.empty() ? "" : ",") + c;
  return out + "\n";
}

std::string state_json(const Eigen::MatrixXcd& rho) { return matrix_json(rho).dump(); }

Eigen::MatrixXcd state_from_json(const std::string& text) {
  const json j = json::parse(text);
  const auto dim = j.at("dim").get<Eigen::Index>();
  const auto& rows = j.at("matrix");
  if (static_cast<Eigen::Index>(rows.size()) != dim) {
    throw std::invalid_argument("state_from_json: row count does not match dim");
  }
  Eigen::MatrixXcd rho(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const auto& row = rows.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != dim) {
      throw std::invalid_argument("state_from_json: column count does not match dim");
    }
    for (Eigen::Index c = 0; c < dim; ++c) {
      const auto& z = row.at(static_cast<std::size_t>(c));
      rho(r, c) = {z.at(0).get<double>(), z.at(1).get<double>()};
    }
  }
  return rho;
}

std::string records_json(const std::vector<PointRecord>& records, bool include_states) {
  json out = {{"schema", kJsonSchema}, {"records", json::array()}};
  for (const auto& rec : records) {
    const auto& p = rec.params;
    std::vector<double> temps;
    for (double b : p.beta) temps.push_back(1.0 / b);
    json r = {
        {"point", rec.point},
        {"model", to_string(rec.kind)},
        {"method", to_string(rec.result.method)},
        {"order", rec.result.order >= 0 ? json(rec.result.order) : json(nullptr)},
        {"parameters", {{"g", p.g}, {"E", p.energy}, {"beta", p.beta}, {"T", temps}, {"p", p.rate}}},
        {"detuning", rec.thermo.detuning ? json(*rec.thermo.detuning) : json(nullptr)},
        {"convergence_ratio", number(rec.result.diagnostics.convergence_ratio)},
        {"coefficients", rec.coefficients},
        {"Q", rec.thermo.heat},
        {"Qg", rec.thermo.interaction},
        {"entropy_rate", rec.thermo.entropy_rate},
        {"first_law_residual", rec.thermo.first_law_residual},
        {"first_law_g_residual", rec.thermo.first_law_g_residual},
        {"first_law_ok", rec.thermo.first_law_ok},
        {"second_law_ok", rec.thermo.second_law_ok},
        {"cooling", rec.thermo.cooling ? json(*rec.thermo.cooling) : json(nullptr)},
        {"verdict", rec.thermo.verdict},
        {"residual", number(rec.result.residual)},
        {"trace_error", trace_error(rec.result.rho)},
        {"discarded", rec.result.diagnostics.discarded},
    };
    if (include_states) r["state"] = matrix_json(rec.result.rho);
    out["records"].push_back(std::move(r));
  }
  return out.dump(2) + "\n";
}

std::string states_json(const std::vector<PointRecord>& records) {
  json out = {{"schema", kJsonSchema}, {"states", json::array()}};
  for (const auto& rec : records) {
    json s = matrix_json(rec.result.rho);
    s["point"] = rec.point;
    s["method"] = to_string(rec.result.method);
    out["states"].push_back(std::move(s));
  }
  return out.dump(2) + "\n";
}

}  // namespace locme
