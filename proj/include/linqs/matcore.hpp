// Copyright 2026 The linqs Authors
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

// Structural matrix algebra for linear bosonic systems: doubled-up matrices,
// the flat and sharp adjoints, Bogoliubov/symplectic tests and the
// annihilation-creation to quadrature change of basis.
//
// All functions are pure and accept any dense Eigen expression.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "linqs/errors.hpp"

namespace linqs {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Default tolerance for structural hypotheses and validation.
inline constexpr double kDefaultTol = 1e-9;
/// Default tolerance for algebraic identities that hold to rounding.
inline constexpr double kEqualityTol = 1e-12;

/// Induced infinity norm (maximum absolute row sum); 0 for empty matrices.
template <typename Derived>
double norm_inf(const Eigen::MatrixBase<Derived>& x) {
  if (x.size() == 0) return 0.0;
  return x.cwiseAbs().rowwise().sum().maxCoeff();
}

/// ||x - y|| <= tol * max(1, ||x||, ||y||). False on shape mismatch.
template <typename A, typename B>
bool approx_equal(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y,
                  double tol = kEqualityTol) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
  const double scale = std::max({1.0, norm_inf(x), norm_inf(y)});
  return norm_inf(x - y) <= tol * scale;
}

/// ||Im(x)|| <= tol * ||x||. Exact zero counts as real.
template <typename Derived>
bool is_real(const Eigen::MatrixBase<Derived>& x, double tol = kDefaultTol) {
  if constexpr (Eigen::NumTraits<typename Derived::Scalar>::IsComplex) {
    return norm_inf(x.imag()) <= tol * norm_inf(x);
  } else {
    return true;
  }
}

/// ||Re(x)|| <= tol * ||x||. Exact zero counts as imaginary.
template <typename Derived>
bool is_imaginary(const Eigen::MatrixBase<Derived>& x,
                  double tol = kDefaultTol) {
  return norm_inf(x.real()) <= tol * norm_inf(x);
}

/// J_k = diag(I_k, -I_k).
inline RMatrix flat_metric(Index k) {
  RMatrix j = RMatrix::Identity(2 * k, 2 * k);
  j.bottomRightCorner(k, k) *= -1.0;
  return j;
}

/// The symplectic form [[0, I_k], [-I_k, 0]].
inline RMatrix symplectic_form(Index k) {
  RMatrix j = RMatrix::Zero(2 * k, 2 * k);
  j.topRightCorner(k, k).setIdentity();
  j.bottomLeftCorner(k, k) = -RMatrix::Identity(k, k);
  return j;
}

/// Doubled-up matrix [[U, V], [conj(V), conj(U)]].
template <typename DU, typename DV>
Matrix<typename DU::Scalar> delta(const Eigen::MatrixBase<DU>& u,
                                  const Eigen::MatrixBase<DV>& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw DimensionError("delta: U is " + std::to_string(u.rows()) + "x" +
                         std::to_string(u.cols()) + " but V is " +
                         std::to_string(v.rows()) + "x" +
                         std::to_string(v.cols()));
  }
  const Index k = u.rows();
  const Index r = u.cols();
  Matrix<typename DU::Scalar> out(2 * k, 2 * r);
  out << u, v, v.conjugate(), u.conjugate();
  return out;
}

namespace detail {
template <typename Derived>
void require_even(const Eigen::MatrixBase<Derived>& x, const char* op) {
  if (x.rows() % 2 != 0 || x.cols() % 2 != 0) {
    throw DimensionError(std::string(op) + ": dimensions " +
                         std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()) + " are not even");
  }
}
}  // namespace detail

/// X^flat = J_r X^dagger J_k for X of size 2k x 2r.
template <typename Derived>
Matrix<typename Derived::Scalar> flat_adjoint(
    const Eigen::MatrixBase<Derived>& x) {
  detail::require_even(x, "flat_adjoint");
  const Index k = x.rows() / 2;
  const Index r = x.cols() / 2;
  Matrix<typename Derived::Scalar> y = x.adjoint();
  y.bottomRows(r) *= -1.0;
  y.rightCols(k) *= -1.0;
  return y;
}

/// X^sharp = -JJ_r X^dagger JJ_k for X of size 2k x 2r, JJ the symplectic form.
template <typename Derived>
Matrix<typename Derived::Scalar> sharp_adjoint(
    const Eigen::MatrixBase<Derived>& x) {
  detail::require_even(x, "sharp_adjoint");
  const Index k = x.rows() / 2;
  const Index r = x.cols() / 2;
  using S = typename Derived::Scalar;
  return -symplectic_form(r).template cast<S>() * x.adjoint() *
         symplectic_form(k).template cast<S>();
}

enum class StructureKind { doubled_up, bogoliubov, symplectic };

/// Result of a structure test; converts to bool.
struct StructureCheck {
  bool ok = false;
  std::string diagnostic;
  explicit operator bool() const { return ok; }
};

template <typename Derived>
StructureCheck structure_test(const Eigen::MatrixBase<Derived>& x,
                              StructureKind kind, double tol = kDefaultTol) {
  using S = typename Derived::Scalar;
  if (x.rows() % 2 != 0 || x.cols() % 2 != 0) {
    return {false, "odd dimension " + std::to_string(x.rows()) + "x" +
                       std::to_string(x.cols())};
  }
  const Index k = x.rows() / 2;
  const Index r = x.cols() / 2;
  const double scale = std::max(1.0, norm_inf(x));

  auto doubled = [&]() -> StructureCheck {
    const double res = std::max(
        norm_inf(x.bottomLeftCorner(k, r) - x.topRightCorner(k, r).conjugate()),
        norm_inf(x.bottomRightCorner(k, r) - x.topLeftCorner(k, r).conjugate()));
    if (res > tol * scale) {
      return {false, "lower blocks differ from conjugated upper blocks by " +
                         std::to_string(res)};
    }
    return {true, {}};
  };

  if (kind == StructureKind::doubled_up) return doubled();
  if (k != r) return {false, "not square"};
  const Matrix<S> id = Matrix<S>::Identity(2 * k, 2 * k);
  if (kind == StructureKind::bogoliubov) {
    if (auto d = doubled(); !d) return d;
    const Matrix<S> xf = flat_adjoint(x);
    const double res = std::max(norm_inf(x * xf - id), norm_inf(xf * x - id));
    if (res > tol * scale * scale) {
      return {false, "T T^flat differs from I by " + std::to_string(res)};
    }
    return {true, {}};
  }
  const Matrix<S> xs = sharp_adjoint(x);
  const double res = std::max(norm_inf(x * xs - id), norm_inf(xs * x - id));
  if (res > tol * scale * scale) {
    return {false, "S S^sharp differs from I by " + std::to_string(res)};
  }
  return {true, {}};
}

/// V_n = (1/sqrt 2) [[I, I], [-iI, iI]], mapping (a, a^#) to (q, p).
inline CMatrix quadrature_transform(Index n) {
  if (n < 1) throw DimensionError("quadrature_transform: n must be >= 1");
  const cdouble i(0.0, 1.0);
  const CMatrix id = CMatrix::Identity(n, n);
  CMatrix v(2 * n, 2 * n);
  v << id, id, -i * id, i * id;
  return v / std::sqrt(2.0);
}

/// V_k X V_r^dagger for X of size 2k x 2r. Doubled-up inputs map to real
/// matrices; the imaginary residue is left in place for callers to check.
template <typename Derived>
CMatrix quadrature_image(const Eigen::MatrixBase<Derived>& x) {
  detail::require_even(x, "quadrature_image");
  return quadrature_transform(x.rows() / 2) * x.template cast<cdouble>() *
         quadrature_transform(x.cols() / 2).adjoint();
}

/// [[Re S, -Im S], [Im S, Re S]]: the quadrature image of Delta(S, 0).
template <typename Derived>
RMatrix passive_quadrature(const Eigen::MatrixBase<Derived>& s) {
  RMatrix out(2 * s.rows(), 2 * s.cols());
  out << s.real(), -s.imag(), s.imag(), s.real();
  return out;
}

}  // namespace linqs
