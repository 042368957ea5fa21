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

#include "locme/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>

namespace locme {

namespace {

std::string where(const YAML::Node& node, const std::string& field) {
  const auto mark = node.Mark();
  if (mark.line < 0) return field;
  return "line " + std::to_string(mark.line + 1) + ": " + field;
}

void require_map(const YAML::Node& node, const std::string& field) {
  if (!node.IsMap()) throw ConfigError(where(node, field) + ": expected a mapping");
}

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed,
                const std::string& section) {
  require_map(node, section);
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.contains(key)) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      throw ConfigError(where(kv.first, section.empty() ? key : section + "." + key) +
                        ": unknown key (allowed: " + list + ")");
    }
  }
}

double as_number(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) throw ConfigError(where(node, field) + ": expected a number");
  double v = 0;
  try {
    v = node.as<double>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where(node, field) + ": expected a number, got '" + node.Scalar() + "'");
  }
  if (!std::isfinite(v)) throw ConfigError(where(node, field) + ": must be finite");
  return v;
}

double as_positive(const YAML::Node& node, const std::string& field) {
  const double v = as_number(node, field);
  if (v <= 0) throw ConfigError(where(node, field) + ": must be positive");
  return v;
}

long long as_integer(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) throw ConfigError(where(node, field) + ": expected an integer");
  try {
    return node.as<long long>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where(node, field) + ": expected an integer, got '" + node.Scalar() + "'");
  }
}

std::string as_string(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) throw ConfigError(where(node, field) + ": expected a string");
  return node.Scalar();
}

bool as_bool(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) throw ConfigError(where(node, field) + ": expected true or false");
  try {
    return node.as<bool>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where(node, field) + ": expected true or false");
  }
}

std::complex<double> as_entry(const YAML::Node& node, const std::string& field) {
  if (node.IsScalar()) return as_number(node, field);
  if (node.IsSequence() && node.size() == 2) {
    return {as_number(node[0], field + "[re]"), as_number(node[1], field + "[im]")};
  }
  throw ConfigError(where(node, field) + ": expected a number or an [re, im] pair");
}

ModelKind parse_kind(const YAML::Node& node) {
  const std::string s = as_string(node, "model");
  if (s == "two_qubit") return ModelKind::two_qubit;
  if (s == "refrigerator") return ModelKind::refrigerator;
  if (s == "custom") return ModelKind::custom;
  throw ConfigError(where(node, "model") + ": unknown model '" + s +
                    "' (two_qubit, refrigerator, custom)");
}

// Parameter names look like E1, beta2, T3, p1 or g.
struct ParameterName {
  enum class Field { energy, beta, temperature, rate, coupling } field;
  std::size_t qubit = 0;
};

ParameterName parse_parameter(const std::string& name, std::size_t n_qubits) {
  if (name == "g") return {ParameterName::Field::coupling};
  static const std::vector<std::pair<std::string, ParameterName::Field>> prefixes{
      {"beta", ParameterName::Field::beta},
      {"E", ParameterName::Field::energy},
      {"T", ParameterName::Field::temperature},
      {"p", ParameterName::Field::rate}};
  for (const auto& [prefix, field] : prefixes) {
    if (name.rfind(prefix, 0) != 0) continue;
    const std::string digits = name.substr(prefix.size());
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) break;
    const std::size_t index = std::stoul(digits);
    if (index < 1 || index > n_qubits) {
      throw ConfigError("parameter '" + name + "': qubit number out of range 1.." +
                        std::to_string(n_qubits));
    }
    return {field, index - 1};
  }
  throw ConfigError("unknown parameter '" + name + "' (use g, E<i>, beta<i>, T<i> or p<i>)");
}

}  // namespace

void validate_scenario(const Scenario& s) {
  if (s.order < 0) throw ConfigError("solver.order: must be >= 0");
  if (s.kind == ModelKind::custom &&
      std::find(s.methods.begin(), s.methods.end(), Method::closed_form) != s.methods.end()) {
    throw ConfigError("solver.method: closed_form is only available for two_qubit and refrigerator models");
  }
  try {
    std::size_t k = 0;
    for (const auto& point : s.sweep_points()) {
      try {
        (void)s.model_at(point);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("sweep point " + std::to_string(k) + ": " + e.what());
      }
      ++k;
    }
  } catch (const DimensionMismatch& e) {
    throw ConfigError(std::string("interaction: ") + e.what());
  }
}


void ParameterPoint::set(const std::string& name, double value) {
  const auto p = parse_parameter(name, energy.size());
  switch (p.field) {
    case ParameterName::Field::coupling: g = value; break;
    case ParameterName::Field::energy: energy[p.qubit] = value; break;
    case ParameterName::Field::beta: beta[p.qubit] = value; break;
    case ParameterName::Field::temperature: beta[p.qubit] = 1.0 / value; break;
    case ParameterName::Field::rate: rate[p.qubit] = value; break;
  }
}

double ParameterPoint::get(const std::string& name) const {
  const auto p = parse_parameter(name, energy.size());
  switch (p.field) {
    case ParameterName::Field::coupling: return g;
    case ParameterName::Field::energy: return energy[p.qubit];
    case ParameterName::Field::beta: return beta[p.qubit];
    case ParameterName::Field::temperature: return 1.0 / beta[p.qubit];
    case ParameterName::Field::rate: return rate[p.qubit];
  }
  return 0;
}

SystemModel Scenario::model_at(const ParameterPoint& point) const {
  std::vector<QubitSpec> qubits;
  for (std::size_t i = 0; i < point.energy.size(); ++i) {
    if (!(point.beta[i] > 0) || !std::isfinite(point.beta[i])) {
      throw std::invalid_argument("qubit " + std::to_string(i + 1) +
                                  ": temperature must be positive and finite");
    }
    qubits.emplace_back(point.energy[i], point.beta[i], point.rate[i]);
  }
  switch (kind) {
    case ModelKind::two_qubit:
      if (qubits.size() != 2) throw std::invalid_argument("two_qubit model needs 2 qubits");
      return build_two_qubit(qubits[0], qubits[1], point.g);
    case ModelKind::refrigerator:
      if (qubits.size() != 3) throw std::invalid_argument("refrigerator model needs 3 qubits");
      return build_refrigerator(qubits[0], qubits[1], qubits[2], point.g);
    case ModelKind::custom:
      if (!interaction) throw std::invalid_argument("custom model needs an interaction matrix");
      return build_custom(std::move(qubits), *interaction, point.g);
  }
  throw std::invalid_argument("unknown model kind");
}

std::vector<ParameterPoint> Scenario::sweep_points() const {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> values;
  for (const auto& axis : sweep) {
    std::vector<double> v;
    if (axis.random) {
      std::uniform_real_distribution<double> dist(std::min(axis.from, axis.to),
                                                  std::max(axis.from, axis.to));
      for (int k = 0; k < axis.steps; ++k) v.push_back(dist(rng));
    } else if (axis.steps == 1) {
      v.push_back(axis.from);
    } else {
      for (int k = 0; k < axis.steps; ++k) {
        v.push_back(axis.from + (axis.to - axis.from) * k / (axis.steps - 1));
      }
    }
    values.push_back(std::move(v));
  }

  std::vector<ParameterPoint> points;
  ParameterPoint current = base;
  std::function<void(std::size_t)> expand = [&](std::size_t depth) {
    if (depth == values.size()) {
      points.push_back(current);
      return;
    }
    for (double v : values[depth]) {
      current.set(sweep[depth].parameter, v);
      expand(depth + 1);
    }
  };
  expand(0);
  return points;
}

std::vector<Method> parse_methods(const std::string& text) {
  if (text == "exact") return {Method::exact};
  if (text == "perturbative") return {Method::perturbative};
  if (text == "closed_form") return {Method::closed_form};
  if (text == "evolve") return {Method::evolved};
  if (text == "all") return {Method::exact, Method::perturbative, Method::closed_form, Method::evolved};
  throw ConfigError("unknown method '" + text +
                    "' (exact, perturbative, closed_form, evolve, all)");
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw ConfigError("unknown output format '" + text + "' (csv, json)");
}

Scenario parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError("scenario must be a mapping at the top level");
  check_keys(root,
             {"model", "g", "qubits", "interaction", "solver", "sweep", "series", "output",
              "tolerances", "seed"},
             "");

  Scenario s;
  if (!root["model"]) throw ConfigError("model: missing (two_qubit, refrigerator, custom)");
  s.kind = parse_kind(root["model"]);
  if (!root["g"]) throw ConfigError("g: missing");
  s.base.g = as_number(root["g"], "g");
  if (s.base.g < 0) throw ConfigError(where(root["g"], "g") + ": must be >= 0");

  const YAML::Node qubits = root["qubits"];
  if (!qubits || !qubits.IsSequence() || qubits.size() == 0) {
    throw ConfigError(where(qubits ? qubits : root, "qubits") + ": expected a non-empty list");
  }
  const std::size_t expected = s.kind == ModelKind::two_qubit      ? 2
                               : s.kind == ModelKind::refrigerator ? 3
                                                                    : qubits.size();
  if (qubits.size() != expected) {
    throw ConfigError(where(qubits, "qubits") + ": model '" + to_string(s.kind) + "' needs " +
                      std::to_string(expected) + " qubits, got " + std::to_string(qubits.size()));
  }
  if (qubits.size() > 10) throw ConfigError(where(qubits, "qubits") + ": at most 10 qubits");
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    const YAML::Node q = qubits[i];
    const std::string field = "qubits[" + std::to_string(i + 1) + "]";
    check_keys(q, {"E", "beta", "T", "p"}, field);
    if (!q["E"] || !q["p"]) throw ConfigError(where(q, field) + ": E and p are required");
    if (static_cast<bool>(q["beta"]) == static_cast<bool>(q["T"])) {
      throw ConfigError(where(q, field) + ": give exactly one of beta or T");
    }
    s.base.energy.push_back(as_positive(q["E"], field + ".E"));
    s.base.rate.push_back(as_positive(q["p"], field + ".p"));
    s.base.beta.push_back(q["beta"] ? as_positive(q["beta"], field + ".beta")
                                    : 1.0 / as_positive(q["T"], field + ".T"));
  }

  if (const YAML::Node x = root["interaction"]) {
    if (s.kind != ModelKind::custom) {
      throw ConfigError(where(x, "interaction") + ": only allowed for model 'custom'");
    }
    const auto dim = static_cast<Index>(1) << qubits.size();
    if (!x.IsSequence() || static_cast<Index>(x.size()) != dim) {
      throw ConfigError(where(x, "interaction") + ": expected " + std::to_string(dim) + " rows");
    }
    Eigen::MatrixXcd m(dim, dim);
    for (Index r = 0; r < dim; ++r) {
      const YAML::Node row = x[static_cast<std::size_t>(r)];
      if (!row.IsSequence() || static_cast<Index>(row.size()) != dim) {
        throw ConfigError(where(row, "interaction row " + std::to_string(r + 1)) + ": expected " +
                          std::to_string(dim) + " entries");
      }
      for (Index c = 0; c < dim; ++c) {
        m(r, c) = as_entry(row[static_cast<std::size_t>(c)],
                           "interaction[" + std::to_string(r + 1) + "][" + std::to_string(c + 1) + "]");
      }
    }
    if (!is_hermitian(m, 1e-12)) throw ConfigError(where(x, "interaction") + ": not Hermitian");
    s.interaction = m;
  } else if (s.kind == ModelKind::custom) {
    throw ConfigError("interaction: required for model 'custom'");
  }

  if (const YAML::Node solver = root["solver"]) {
    check_keys(solver, {"method", "order", "current", "evolve"}, "solver");
    if (const YAML::Node m = solver["method"]) {
      s.methods.clear();
      const auto add = [&](const YAML::Node& n) {
        try {
          for (Method method : parse_methods(as_string(n, "solver.method"))) {
            if (std::find(s.methods.begin(), s.methods.end(), method) == s.methods.end()) {
              s.methods.push_back(method);
            }
          }
        } catch (const ConfigError& e) {
          throw ConfigError(where(n, "solver.method") + ": " + e.what());
        }
      };
      if (m.IsSequence()) {
        for (const auto& item : m) add(item);
      } else {
        add(m);
      }
      if (s.methods.empty()) throw ConfigError(where(m, "solver.method") + ": empty");
    }
    if (const YAML::Node k = solver["order"]) {
      const long long order = as_integer(k, "solver.order");
      if (order < 0 || order > 64) throw ConfigError(where(k, "solver.order") + ": must be in 0..64");
      s.order = static_cast<int>(order);
    }
    if (const YAML::Node c = solver["current"]) {
      const std::string v = as_string(c, "solver.current");
      if (v == "full") {
        s.current = CurrentHamiltonian::full;
      } else if (v == "free") {
        s.current = CurrentHamiltonian::free;
      } else {
        throw ConfigError(where(c, "solver.current") + ": expected 'full' or 'free'");
      }
    }
    if (const YAML::Node e = solver["evolve"]) {
      check_keys(e, {"dt", "t_max", "tol"}, "solver.evolve");
      if (e["dt"]) s.evolve.dt = as_positive(e["dt"], "solver.evolve.dt");
      if (e["t_max"]) s.evolve.t_max = as_positive(e["t_max"], "solver.evolve.t_max");
      if (e["tol"]) s.evolve.tol = as_positive(e["tol"], "solver.evolve.tol");
    }
  }

  if (const YAML::Node sweep = root["sweep"]) {
    std::vector<YAML::Node> axes;
    if (sweep.IsSequence()) {
      for (const auto& a : sweep) axes.push_back(a);
    } else {
      axes.push_back(sweep);
    }
    if (axes.empty()) throw ConfigError(where(sweep, "sweep") + ": empty");
    for (const auto& a : axes) {
      check_keys(a, {"parameter", "from", "to", "steps", "mode"}, "sweep");
      if (!a["parameter"] || !a["from"] || !a["to"] || !a["steps"]) {
        throw ConfigError(where(a, "sweep") + ": parameter, from, to and steps are required");
      }
      SweepAxis axis;
      axis.parameter = as_string(a["parameter"], "sweep.parameter");
      try {
        (void)s.base.get(axis.parameter);
      } catch (const ConfigError& e) {
        throw ConfigError(where(a["parameter"], "sweep.parameter") + ": " + e.what());
      }
      axis.from = as_number(a["from"], "sweep.from");
      axis.to = as_number(a["to"], "sweep.to");
      const long long steps = as_integer(a["steps"], "sweep.steps");
      if (steps < 1 || steps > 100000) {
        throw ConfigError(where(a["steps"], "sweep.steps") + ": must be in 1..100000");
      }
      axis.steps = static_cast<int>(steps);
      if (const YAML::Node mode = a["mode"]) {
        const std::string m = as_string(mode, "sweep.mode");
        if (m == "random") {
          axis.random = true;
        } else if (m != "grid") {
          throw ConfigError(where(mode, "sweep.mode") + ": expected 'grid' or 'random'");
        }
      }
      s.sweep.push_back(axis);
    }
  }

  if (const YAML::Node series = root["series"]) {
    check_keys(series, {"couplings"}, "series");
    if (const YAML::Node cs = series["couplings"]) {
      if (!cs.IsSequence() || cs.size() == 0) {
        throw ConfigError(where(cs, "series.couplings") + ": expected a non-empty list");
      }
      s.series_couplings.clear();
      for (const auto& c : cs) {
        const double g = as_number(c, "series.couplings");
        if (g < 0) throw ConfigError(where(c, "series.couplings") + ": must be >= 0");
        s.series_couplings.push_back(g);
      }
    }
  }

  if (const YAML::Node output = root["output"]) {
    check_keys(output, {"format", "path", "states"}, "output");
    if (output["format"]) {
      try {
        s.format = parse_format(as_string(output["format"], "output.format"));
      } catch (const ConfigError& e) {
        throw ConfigError(where(output["format"], "output.format") + ": " + e.what());
      }
    }
    if (output["path"]) s.output_path = as_string(output["path"], "output.path");
    if (output["states"]) s.emit_states = as_bool(output["states"], "output.states");
  }

  if (const YAML::Node tol = root["tolerances"]) {
    check_keys(tol, {"residual", "failure", "degeneracy", "positivity", "trace"}, "tolerances");
    if (tol["residual"]) s.tol.residual = as_positive(tol["residual"], "tolerances.residual");
    if (tol["failure"]) s.tol.failure = as_positive(tol["failure"], "tolerances.failure");
    if (tol["degeneracy"]) s.tol.degeneracy = as_positive(tol["degeneracy"], "tolerances.degeneracy");
    if (tol["positivity"]) s.tol.positivity = as_positive(tol["positivity"], "tolerances.positivity");
    if (tol["trace"]) s.tol.trace = as_positive(tol["trace"], "tolerances.trace");
  }

  if (const YAML::Node seed = root["seed"]) {
    const long long v = as_integer(seed, "seed");
    if (v < 0) throw ConfigError(where(seed, "seed") + ": must be >= 0");
    s.seed = static_cast<std::uint64_t>(v);
  }

  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_scenario(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

Scenario default_two_qubit_scenario() {
  Scenario s;
  s.kind = ModelKind::two_qubit;
  s.base.energy = {1.0, 1.0};
  s.base.beta = {1.0, 0.5};
  s.base.rate = {0.1, 0.1};
  s.base.g = 0.05;
  return s;
}

Scenario default_refrigerator_scenario() {
  Scenario s;
  s.kind = ModelKind::refrigerator;
  s.base.energy = {1.0, 2.0, 1.0};
  s.base.beta = {1.0, 0.5, 0.1};
  s.base.rate = {0.1, 0.1, 0.1};
  s.base.g = 0.05;
  return s;
}

}  // namespace locme
