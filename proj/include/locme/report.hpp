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

// Tabular and JSON rendering of per-point results.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "locme/scenario.hpp"

namespace locme {

inline constexpr const char* kCsvSchema = "locme-csv-1";
inline constexpr const char* kJsonSchema = "locme-json-1";

/// One solved steady state at one parameter point.
struct PointRecord {
  std::size_t point = 0;
  ModelKind kind = ModelKind::two_qubit;
  ParameterPoint params;
  SteadyStateResult result;
  /// d, m, a1.., b12.., c projected from the state; empty for custom models.
  std::map<std::string, double> coefficients;
  ThermoReport thermo;
};

/// Column names. Parameter and current columns cover max(3, n_qubits) qubits.
std::vector<std::string> csv_columns(std::size_t n_qubits);
std::string csv_header(std::size_t n_qubits);
std::string csv_row(const PointRecord& record, std::size_t n_qubits);

/// Shortest decimal form that reads back to the same double, or nan/inf/-inf.
std::string format_number(double value);

/// {"dim": D, "matrix": [[[re, im], ...], ...]} with rows in order.
std::string state_json(const Eigen::MatrixXcd& rho);
Eigen::MatrixXcd state_from_json(const std::string& text);

/// Full JSON document holding every record.
std::string records_json(const std::vector<PointRecord>& records, bool include_states);
/// Only the density matrices, keyed by point and method.
std::string states_json(const std::vector<PointRecord>& records);

}  // namespace locme
