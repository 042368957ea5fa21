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

// Dense complex operator algebra for small composite quantum systems.
//
// Conventions used throughout the library:
//   * Composite spaces are ordered with subsystem 0 as the most significant
//     (leftmost) Kronecker factor.
//   * Operators are vectorized by column stacking, vec(m)[c * dim + r] = m(r, c),
//     which is Eigen's native column-major layout. With this convention
//     vec(A X B) = (B^T kron A) vec(X).

#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "locme/errors.hpp"

namespace locme {

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

/// Numerical thresholds shared by the linear solves.
struct Tolerances {
  double residual = 1e-10;    ///< steady-state residual ||L(rho)|| accepted as converged
  double failure = 1e-9;      ///< residual above which no steady state is declared
  double degeneracy = 1e-9;   ///< relative singular-value gap signalling a degenerate kernel
  double positivity = 1e-10;  ///< slack on negative eigenvalues of a density matrix
  double trace = 1e-10;       ///< accepted |tr(rhs)| for traceless solves
};

namespace detail {

inline std::string dims_string(Index r1, Index c1, Index r2, Index c2) {
  return std::to_string(r1) + "x" + std::to_string(c1) + " vs " + std::to_string(r2) + "x" +
         std::to_string(c2);
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw DimensionMismatch(std::string(what) + ": expected a non-empty square matrix, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

// Splits a flat composite index into per-subsystem digits.
inline void digits_of(Index flat, std::span<const Index> dims, std::span<Index> out) {
  for (std::size_t k = dims.size(); k-- > 0;) {
    out[k] = flat % dims[k];
    flat /= dims[k];
  }
}

inline Index product(std::span<const Index> dims) {
  return std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Elementary products
// ---------------------------------------------------------------------------

template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Result = Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Result out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Kronecker product of a list of factors, first factor most significant.
template <typename Scalar>
ComplexMatrix<Scalar> kron_all(std::span<const ComplexMatrix<Scalar>> factors) {
  ComplexMatrix<Scalar> out = ComplexMatrix<Scalar>::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> commutator(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw DimensionMismatch("commutator: " +
                            detail::dims_string(a.rows(), a.cols(), b.rows(), b.cols()));
  }
  return a * b - b * a;
}

// ---------------------------------------------------------------------------
// Predicates
// ---------------------------------------------------------------------------

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return static_cast<double>((m - m.adjoint()).cwiseAbs().maxCoeff()) <= tol;
}

template <typename Derived>
bool is_unit_trace(const Eigen::MatrixBase<Derived>& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return static_cast<double>(std::abs(m.trace() - typename Derived::Scalar(1))) <= tol;
}

/// Hermitian with every eigenvalue >= -tol.
template <typename Derived>
bool is_positive_semidefinite(const Eigen::MatrixBase<Derived>& m, double tol) {
  if (!is_hermitian(m, tol)) return false;
  using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Plain h = (m + m.adjoint()) / 2;
  Eigen::SelfAdjointEigenSolver<Plain> eig(h, Eigen::EigenvaluesOnly);
  return static_cast<double>(eig.eigenvalues().minCoeff()) >= -tol;
}

/// (m + m^dagger)/2. `discarded`, when given, receives the Frobenius norm of the
/// anti-Hermitian remainder that was dropped.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> hermitian_part(
    const Eigen::MatrixBase<Derived>& m, double* discarded = nullptr) {
  using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Plain h = (m + m.adjoint()) / 2;
  if (discarded) *discarded = static_cast<double>(((m - m.adjoint()) / 2).norm());
  return h;
}

// ---------------------------------------------------------------------------
// Partial trace and subsystem insertion
// ---------------------------------------------------------------------------

/// Traces out the subsystems listed in `traced`. `dims` lists every subsystem
/// dimension, most significant first. Tracing out everything yields a 1x1 matrix.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> partial_trace(
    const Eigen::MatrixBase<Derived>& rho, std::span<const Index> dims,
    std::span<const Index> traced) {
  using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  detail::require_square(rho, "partial_trace");
  if (dims.empty() || detail::product(dims) != rho.rows()) {
    throw DimensionMismatch("partial_trace: subsystem dimensions do not multiply to " +
                            std::to_string(rho.rows()));
  }
  std::vector<bool> is_traced(dims.size(), false);
  for (Index t : traced) {
    if (t < 0 || static_cast<std::size_t>(t) >= dims.size()) {
      throw std::out_of_range("partial_trace: subsystem index " + std::to_string(t) +
                              " out of range");
    }
    if (is_traced[t]) throw std::invalid_argument("partial_trace: repeated subsystem index");
    is_traced[t] = true;
  }

  std::vector<Index> kept_dims;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (!is_traced[k]) kept_dims.push_back(dims[k]);
  }
  const Index reduced = detail::product(kept_dims);
  Plain out = Plain::Zero(reduced, reduced);

  std::vector<Index> rd(dims.size()), cd(dims.size());
  for (Index c = 0; c < rho.cols(); ++c) {
    detail::digits_of(c, dims, cd);
    for (Index r = 0; r < rho.rows(); ++r) {
      detail::digits_of(r, dims, rd);
      bool diagonal_in_traced = true;
      Index rr = 0, cc = 0;
      for (std::size_t k = 0; k < dims.size(); ++k) {
        if (is_traced[k]) {
          if (rd[k] != cd[k]) {
            diagonal_in_traced = false;
            break;
          }
        } else {
          rr = rr * dims[k] + rd[k];
          cc = cc * dims[k] + cd[k];
        }
      }
      if (diagonal_in_traced) out(rr, cc) += rho(r, c);
    }
  }
  return out;
}

/// Inverse of tracing out one subsystem: returns the operator on the enlarged
/// space equal to `factor` at `position` tensored with `rest` on the remaining
/// subsystems (whose dimensions are `rest_dims`).
template <typename DerivedR, typename DerivedF>
Eigen::Matrix<typename DerivedR::Scalar, Eigen::Dynamic, Eigen::Dynamic> insert_subsystem(
    const Eigen::MatrixBase<DerivedR>& rest, std::span<const Index> rest_dims,
    const Eigen::MatrixBase<DerivedF>& factor, Index position) {
  using Plain = Eigen::Matrix<typename DerivedR::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  detail::require_square(factor, "insert_subsystem");
  if (detail::product(rest_dims) != rest.rows() || rest.rows() != rest.cols()) {
    throw DimensionMismatch("insert_subsystem: rest dimensions inconsistent");
  }
  if (position < 0 || static_cast<std::size_t>(position) > rest_dims.size()) {
    throw std::out_of_range("insert_subsystem: position out of range");
  }
  std::vector<Index> dims(rest_dims.begin(), rest_dims.end());
  dims.insert(dims.begin() + position, factor.rows());
  const Index total = detail::product(dims);
  Plain out(total, total);
  std::vector<Index> rd(dims.size()), cd(dims.size());
  for (Index c = 0; c < total; ++c) {
    detail::digits_of(c, dims, cd);
    for (Index r = 0; r < total; ++r) {
      detail::digits_of(r, dims, rd);
      Index rr = 0, cc = 0;
      for (std::size_t k = 0; k < dims.size(); ++k) {
        if (static_cast<Index>(k) == position) continue;
        rr = rr * dims[k] + rd[k];
        cc = cc * dims[k] + cd[k];
      }
      out(r, c) = factor(rd[position], cd[position]) * rest(rr, cc);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Vectorization
// ---------------------------------------------------------------------------

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> vectorize(
    const Eigen::MatrixBase<Derived>& m) {
  using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Plain dense = m;  // column-major
  return Eigen::Map<const Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>>(
      dense.data(), dense.size());
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> devectorize(
    const Eigen::MatrixBase<Derived>& v) {
  const Index n = v.size();
  const auto dim = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (v.cols() != 1 || dim * dim != n || n == 0) {
    throw DimensionMismatch("devectorize: length " + std::to_string(n) +
                            " is not a perfect square");
  }
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> dense = v;
  return Eigen::Map<const Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>>(
      dense.data(), dim, dim);
}

// ---------------------------------------------------------------------------
// Superoperators
// ---------------------------------------------------------------------------

/// Linear map on dim x dim operators, stored as a dim^2 x dim^2 matrix acting on
/// column-stacked vectors.
template <typename Scalar>
struct Superoperator {
  Index dim = 0;
  ComplexMatrix<Scalar> matrix;

  Superoperator() = default;
  Superoperator(Index d, ComplexMatrix<Scalar> m) : dim(d), matrix(std::move(m)) {
    if (matrix.rows() != d * d || matrix.cols() != d * d) {
      throw DimensionMismatch("Superoperator: matrix must be dim^2 x dim^2");
    }
  }

  static Superoperator Zero(Index d) {
    return Superoperator(d, ComplexMatrix<Scalar>::Zero(d * d, d * d));
  }

  template <typename Derived>
  ComplexMatrix<Scalar> apply(const Eigen::MatrixBase<Derived>& rho) const {
    if (rho.rows() != dim || rho.cols() != dim) {
      throw DimensionMismatch("Superoperator::apply: " +
                              detail::dims_string(rho.rows(), rho.cols(), dim, dim));
    }
    return devectorize(matrix * vectorize(rho));
  }

  Superoperator& operator+=(const Superoperator& other) {
    if (other.dim != dim) throw DimensionMismatch("Superoperator::operator+=");
    matrix += other.matrix;
    return *this;
  }
  friend Superoperator operator+(Superoperator a, const Superoperator& b) { return a += b; }
  friend Superoperator operator*(std::complex<Scalar> s, Superoperator a) {
    a.matrix *= s;
    return a;
  }
};

/// Row vector t with t * vec(m) = tr(m).
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 1, Eigen::Dynamic> trace_functional(Index dim) {
  Eigen::Matrix<std::complex<Scalar>, 1, Eigen::Dynamic> t =
      Eigen::Matrix<std::complex<Scalar>, 1, Eigen::Dynamic>::Zero(dim * dim);
  for (Index k = 0; k < dim; ++k) t(k * (dim + 1)) = 1;
  return t;
}

/// rho -> a rho
template <typename Scalar>
Superoperator<Scalar> left_multiplication(const ComplexMatrix<Scalar>& a) {
  detail::require_square(a, "left_multiplication");
  const Index d = a.rows();
  return {d, kron(ComplexMatrix<Scalar>::Identity(d, d), a)};
}

/// rho -> rho b
template <typename Scalar>
Superoperator<Scalar> right_multiplication(const ComplexMatrix<Scalar>& b) {
  detail::require_square(b, "right_multiplication");
  const Index d = b.rows();
  return {d, kron(ComplexMatrix<Scalar>(b.transpose()), ComplexMatrix<Scalar>::Identity(d, d))};
}

/// rho -> -i [h, rho]
template <typename Scalar>
Superoperator<Scalar> hamiltonian_superoperator(const ComplexMatrix<Scalar>& h) {
  detail::require_square(h, "hamiltonian_superoperator");
  const Index d = h.rows();
  const ComplexMatrix<Scalar> id = ComplexMatrix<Scalar>::Identity(d, d);
  const std::complex<Scalar> minus_i(0, -1);
  ComplexMatrix<Scalar> m = minus_i * (kron(id, h) - kron(ComplexMatrix<Scalar>(h.transpose()), id));
  return {d, std::move(m)};
}

/// Matrix realization of an arbitrary linear map, assembled column by column
/// from its action on the matrix units |r><c|.
template <typename Scalar, typename Map>
Superoperator<Scalar> superoperator_from_map(Index dim, Map&& map) {
  ComplexMatrix<Scalar> m(dim * dim, dim * dim);
  ComplexMatrix<Scalar> unit = ComplexMatrix<Scalar>::Zero(dim, dim);
  for (Index c = 0; c < dim; ++c) {
    for (Index r = 0; r < dim; ++r) {
      unit(r, c) = 1;
      const ComplexMatrix<Scalar> image = map(unit);
      if (image.rows() != dim || image.cols() != dim) {
        throw DimensionMismatch("superoperator_from_map: map changed the dimension");
      }
      m.col(c * dim + r) = vectorize(image);
      unit(r, c) = 0;
    }
  }
  return {dim, std::move(m)};
}

// ---------------------------------------------------------------------------
// Linear solves
// ---------------------------------------------------------------------------

namespace detail {

// Replaces the equation for the (0,0) element by the trace functional. For a
// trace-preserving generator the diagonal equations are linearly dependent
// (their sum vanishes), so this keeps the system equivalent.
template <typename Scalar>
ComplexMatrix<Scalar> trace_constrained(const Superoperator<Scalar>& L) {
  ComplexMatrix<Scalar> m = L.matrix;
  m.row(0) = trace_functional<Scalar>(L.dim);
  return m;
}

}  // namespace detail

/// Solves L(sigma) = rhs for traceless sigma. The factorization is computed once
/// so a recurrence can reuse it for every order.
template <typename Scalar>
class TracelessSolver {
 public:
  explicit TracelessSolver(const Superoperator<Scalar>& L, const Tolerances& tol = {})
      : dim_(L.dim), tol_(tol) {
    const ComplexMatrix<Scalar> m = detail::trace_constrained(L);
    Eigen::BDCSVD<ComplexMatrix<Scalar>> svd(m);
    const auto& sv = svd.singularValues();
    const double largest = static_cast<double>(sv(0));
    const double smallest = static_cast<double>(sv(sv.size() - 1));
    margin_ = largest > 0 ? smallest / largest : 0.0;
    if (margin_ < tol_.degeneracy) {
      throw SingularOnSubspace("generator is singular on the traceless subspace (sigma_min/sigma_max = " +
                               std::to_string(margin_) + ")");
    }
    lu_.compute(m);
  }

  /// Hermitian traceless solution; `discarded` receives the anti-Hermitian
  /// norm removed by symmetrization.
  ComplexMatrix<Scalar> solve(const ComplexMatrix<Scalar>& rhs, double* discarded = nullptr) const {
    if (rhs.rows() != dim_ || rhs.cols() != dim_) {
      throw DimensionMismatch("TracelessSolver::solve: " +
                              detail::dims_string(rhs.rows(), rhs.cols(), dim_, dim_));
    }
    if (static_cast<double>(std::abs(rhs.trace())) > tol_.trace) {
      throw NonTracelessRHS("right-hand side has trace " +
                            std::to_string(static_cast<double>(std::abs(rhs.trace()))));
    }
    ComplexVector<Scalar> b = vectorize(rhs);
    b(0) = 0;
    const ComplexVector<Scalar> x = lu_.solve(b);
    return hermitian_part(devectorize(x), discarded);
  }

  /// sigma_min / sigma_max of the trace-constrained system.
  double margin() const noexcept { return margin_; }
  Index dim() const noexcept { return dim_; }

 private:
  Index dim_;
  Tolerances tol_;
  double margin_ = 0;
  Eigen::PartialPivLU<ComplexMatrix<Scalar>> lu_;
};

template <typename Scalar>
ComplexMatrix<Scalar> solve_on_traceless_subspace(const Superoperator<Scalar>& L,
                                                  const ComplexMatrix<Scalar>& rhs,
                                                  const Tolerances& tol = {}) {
  return TracelessSolver<Scalar>(L, tol).solve(rhs);
}

template <typename Scalar>
struct KernelSolution {
  ComplexMatrix<Scalar> rho;
  double residual = 0;           ///< ||L(rho)||_F
  double degeneracy_margin = 0;  ///< second-smallest / largest singular value of L
  double discarded = 0;          ///< anti-Hermitian norm removed by symmetrization
};

/// Unit-trace Hermitian kernel element of L.
template <typename Scalar>
KernelSolution<Scalar> nullspace_density_matrix(const Superoperator<Scalar>& L,
                                                const Tolerances& tol = {}) {
  const Index n = L.matrix.rows();
  KernelSolution<Scalar> out;
  if (n > 1) {
    Eigen::BDCSVD<ComplexMatrix<Scalar>> svd(L.matrix);
    const auto& sv = svd.singularValues();
    const double largest = static_cast<double>(sv(0));
    out.degeneracy_margin = largest > 0 ? static_cast<double>(sv(n - 2)) / largest : 0.0;
    if (out.degeneracy_margin < tol.degeneracy) {
      throw DegenerateSteadyState("kernel dimension exceeds one (gap ratio " +
                                  std::to_string(out.degeneracy_margin) + ")");
    }
  } else {
    out.degeneracy_margin = 1.0;
  }

  ComplexVector<Scalar> b = ComplexVector<Scalar>::Zero(n);
  b(0) = 1;
  const ComplexVector<Scalar> x =
      Eigen::PartialPivLU<ComplexMatrix<Scalar>>(detail::trace_constrained(L)).solve(b);
  out.rho = hermitian_part(devectorize(x), &out.discarded);
  out.residual = static_cast<double>(L.apply(out.rho).norm());
  if (!(out.residual <= tol.failure)) {
    throw NoSteadyState("steady-state residual " + std::to_string(out.residual) +
                        " exceeds " + std::to_string(tol.failure));
  }
  return out;
}

}  // namespace locme
