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

#include <stdexcept>
#include <string>

namespace locme {

/// Base class of every numerical failure raised by the solvers.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Kernel of the generator has dimension > 1.
class DegenerateSteadyState : public SolverError {
 public:
  using SolverError::SolverError;
};

/// The returned candidate does not annihilate the generator.
class NoSteadyState : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Generator restricted to traceless operators is not invertible.
class SingularOnSubspace : public SolverError {
 public:
  using SolverError::SolverError;
};

class NonTracelessRHS : public SolverError {
 public:
  using SolverError::SolverError;
};

class NotConverged : public SolverError {
 public:
  NotConverged(const std::string& what, double residual)
      : SolverError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace locme
