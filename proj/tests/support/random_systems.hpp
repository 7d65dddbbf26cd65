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

// Random parameter sets for property tests, including constructions that
// satisfy the structural hypotheses of each analysis.

#pragma once

#include <random>

#include "linqs/qsys.hpp"

namespace linqs::testing {

using Rng = std::mt19937_64;

inline const cdouble kI(0.0, 1.0);

inline RMatrix gaussian(Rng& rng, Index r, Index c) {
  std::normal_distribution<double> d;
  RMatrix x(r, c);
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < c; ++j) x(i, j) = d(rng);
  }
  return x;
}

inline CMatrix ginibre(Rng& rng, Index r, Index c) {
  return (gaussian(rng, r, c).cast<cdouble>() +
          kI * gaussian(rng, r, c).cast<cdouble>()) /
         std::sqrt(2.0);
}

inline CMatrix hermitian(Rng& rng, Index n) {
  const CMatrix g = ginibre(rng, n, n);
  return (g + g.adjoint()) / 2.0;
}

inline CMatrix complex_symmetric(Rng& rng, Index n) {
  const CMatrix g = ginibre(rng, n, n);
  return (g + g.transpose()) / 2.0;
}

inline RMatrix real_symmetric(Rng& rng, Index n) {
  const RMatrix g = gaussian(rng, n, n);
  return (g + g.transpose()) / 2.0;
}

inline RMatrix antisymmetric(Rng& rng, Index n) {
  const RMatrix g = gaussian(rng, n, n);
  return (g - g.transpose()) / 2.0;
}

/// Haar-like unitary: QR of a Ginibre matrix with the phases of R removed.
inline CMatrix unitary(Rng& rng, Index n) {
  Eigen::HouseholderQR<CMatrix> qr(ginibre(rng, n, n));
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

inline RMatrix orthogonal(Rng& rng, Index n) {
  Eigen::HouseholderQR<RMatrix> qr(gaussian(rng, n, n));
  RMatrix q = qr.householderQ();
  const RMatrix r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) *= -1.0;
  }
  return q;
}

inline QuantumLinearSystem assemble(CMatrix S, CMatrix cm, CMatrix cp,
                                    CMatrix om, CMatrix op) {
  QuantumLinearSystem sys;
  sys.modes = om.rows();
  sys.channels = S.rows();
  sys.S = std::move(S);
  sys.C_minus = std::move(cm);
  sys.C_plus = std::move(cp);
  sys.Omega_minus = std::move(om);
  sys.Omega_plus = std::move(op);
  return sys;
}

inline QuantumLinearSystem random_system(Rng& rng, Index n, Index m) {
  return assemble(unitary(rng, m), ginibre(rng, m, n), ginibre(rng, m, n),
                  hermitian(rng, n), complex_symmetric(rng, n));
}

enum class Reality { real, imaginary };

inline CMatrix with_reality(const RMatrix& x, Reality r) {
  return r == Reality::real ? CMatrix(x.cast<cdouble>())
                            : CMatrix(kI * x.cast<cdouble>());
}

/// Omega- = i A (A antisymmetric), Omega+ = i B (B symmetric).
inline std::pair<CMatrix, CMatrix> imaginary_hamiltonian(Rng& rng, Index n) {
  return {kI * antisymmetric(rng, n).cast<cdouble>(),
          kI * real_symmetric(rng, n).cast<cdouble>()};
}

/// Omega purely imaginary; S and C each entrywise real or imaginary.
inline QuantumLinearSystem bilateral_system(Rng& rng, Index n, Index m,
                                        Reality s, Reality c) {
  auto [om, op] = imaginary_hamiltonian(rng, n);
  return assemble(with_reality(orthogonal(rng, m), s),
                  with_reality(gaussian(rng, m, n), c),
                  with_reality(gaussian(rng, m, n), c), om, op);
}

/// Re(Omega-) = sign * Re(Omega+), general imaginary parts.
inline QuantumLinearSystem unilateral_system(Rng& rng, Index n, Index m,
                                             double sign, Reality s,
                                             Reality c) {
  const RMatrix re = real_symmetric(rng, n);
  const CMatrix om = re.cast<cdouble>() + kI * antisymmetric(rng, n).cast<cdouble>();
  const CMatrix op =
      sign * re.cast<cdouble>() + kI * real_symmetric(rng, n).cast<cdouble>();
  return assemble(with_reality(orthogonal(rng, m), s),
                  with_reality(gaussian(rng, m, n), c),
                  with_reality(gaussian(rng, m, n), c), om, op);
}

/// Orthogonal projector onto the complement of span(W).
inline CMatrix complement_projector(const CMatrix& w) {
  const Index d = w.rows();
  return CMatrix::Identity(d, d) -
         w * (w.adjoint() * w).inverse() * w.adjoint();
}

/// [L, H] = 0 by construction: Omega has the doubled-up null space spanned
/// by v_j = [x_j; 0] and its conjugate partner [0; conj(x_j)], and the rows
/// of [C-, -C+] lie in that space. `k` null directions, k <= n.
inline QuantumLinearSystem qnd_system(Rng& rng, Index n, Index m, Index k) {
  const CMatrix x = ginibre(rng, n, k);
  const CMatrix y = ginibre(rng, n, k);
  // Null vectors [x; y] and their Sigma-conjugates [conj y; conj x].
  CMatrix w(2 * n, 2 * k);
  w << x, y.conjugate(), y, x.conjugate();
  const CMatrix q = complement_projector(w);
  const CMatrix omega =
      q * delta(hermitian(rng, n), complex_symmetric(rng, n)) * q;
  const CMatrix rows = ginibre(rng, m, 2 * k) * w.adjoint();
  return assemble(unitary(rng, m), rows.leftCols(n), -rows.rightCols(n),
                  omega.topLeftCorner(n, n), omega.topRightCorner(n, n));
}

enum class SisoBranch { q, p };

/// Single-channel system with S = 1 and [L + L^#, H] = 0 (q branch) or
/// [L - L^#, H] = 0 (p branch).
inline QuantumLinearSystem siso_system(Rng& rng, Index n, SisoBranch b) {
  const CMatrix mvec = ginibre(rng, 1, n);
  const double sign = b == SisoBranch::q ? -1.0 : 1.0;
  CMatrix row(1, 2 * n);
  row << mvec, sign * mvec.conjugate();
  const CMatrix q = complement_projector(row.adjoint());
  const CMatrix omega =
      q * delta(hermitian(rng, n), complex_symmetric(rng, n)) * q;
  const CMatrix cp = ginibre(rng, 1, n);
  const CMatrix cm = mvec + sign * cp.conjugate();
  return assemble(CMatrix::Identity(1, 1), cm, cp, omega.topLeftCorner(n, n),
                  omega.topRightCorner(n, n));
}

enum class Special { c_plus_zero, c_minus_zero, omega_plus_zero,
                     omega_minus_zero };

/// S = I and [L, H] = 0 with the named block vanishing. The cases with a
/// vanishing Hamiltonian block also have C- C+^T symmetric.
inline QuantumLinearSystem special_system(Rng& rng, Index n, Index m,
                                          Special c) {
  const Index k =
      c == Special::omega_minus_zero || n == 1 ? 1 : 1 + Index(rng() % (n - 1));
  const CMatrix x = ginibre(rng, n, k);
  const CMatrix a = ginibre(rng, m, k);
  const CMatrix id = CMatrix::Identity(m, m);
  const CMatrix zc = CMatrix::Zero(m, n);
  const CMatrix zo = CMatrix::Zero(n, n);
  if (c == Special::c_plus_zero || c == Special::c_minus_zero) {
    CMatrix w = CMatrix::Zero(2 * n, 2 * k);
    w.topLeftCorner(n, k) = x;
    w.bottomRightCorner(n, k) = x.conjugate();
    const CMatrix q = complement_projector(w);
    const CMatrix omega =
        q * delta(hermitian(rng, n), complex_symmetric(rng, n)) * q;
    const CMatrix om = omega.topLeftCorner(n, n);
    const CMatrix op = omega.topRightCorner(n, n);
    if (c == Special::c_plus_zero) return assemble(id, a * x.adjoint(), zc, om, op);
    return assemble(id, zc, -a * x.transpose(), om, op);
  }
  // Real X keeps C_minus C_plus^T symmetric when k > 1.
  const cdouble lambda = ginibre(rng, 1, 1)(0, 0);
  if (c == Special::omega_plus_zero) {
    const CMatrix xr = x.real().cast<cdouble>();
    const CMatrix pr = complement_projector(xr);
    return assemble(id, a * xr.adjoint(), lambda * a * xr.transpose(),
                    pr * hermitian(rng, n) * pr, zo);
  }
  const CMatrix p = complement_projector(x);
  return assemble(id, a * x.transpose(), lambda * a * x.adjoint(), zo,
                  p.transpose() * complex_symmetric(rng, n) * p);
}

}  // namespace linqs::testing
