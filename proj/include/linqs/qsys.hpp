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

#include <vector>

#include "linqs/errors.hpp"
#include "linqs/matcore.hpp"

namespace linqs {

/// Linear quantum system with n modes and m field channels:
///   L = C_minus a + C_plus a^#,   H = 1/2 breve(a)^dagger Delta(Omega_minus,
///   Omega_plus) breve(a),   S the m x m scattering matrix.
/// Units are natural (hbar = 1), frequencies in rad per unit time.
struct QuantumLinearSystem {
  Index modes = 0;
  Index channels = 0;
  CMatrix S;            // m x m
  CMatrix C_minus;      // m x n
  CMatrix C_plus;       // m x n
  CMatrix Omega_minus;  // n x n, Hermitian
  CMatrix Omega_plus;   // n x n, symmetric

  /// Omega = Delta(Omega_minus, Omega_plus).
  CMatrix hamiltonian() const { return delta(Omega_minus, Omega_plus); }
  /// Doubled-up coupling Delta(C_minus, C_plus).
  CMatrix coupling() const { return delta(C_minus, C_plus); }
};

/// Every violated invariant (shape, unitarity of S, Hermiticity of
/// Omega_minus, symmetry of Omega_plus, finiteness); empty when valid.
std::vector<Violation> validate(const QuantumLinearSystem& sys,
                                double tol = kDefaultTol);

/// Builds and validates a system; throws ValidationError listing all
/// violations.
QuantumLinearSystem make_system(CMatrix S, CMatrix C_minus, CMatrix C_plus,
                                CMatrix Omega_minus, CMatrix Omega_plus,
                                double tol = kDefaultTol);

enum class Form { annihilation_creation, quadrature };

/// State-space quadruple (A, B, C, D) with 2n states and 2m inputs/outputs.
template <typename Scalar>
struct Realization {
  Form form = Form::annihilation_creation;
  Matrix<Scalar> A, B, C, D;

  Index states() const { return A.rows(); }
  Index ports() const { return D.rows(); }
};

using AcRealization = Realization<cdouble>;
using QuadRealization = Realization<double>;

/// A = -i J_n Omega - 1/2 C^flat C,  B = -C^flat D,  C = Delta(C-, C+),
/// D = Delta(S, 0).
AcRealization ac_realization(const QuantumLinearSystem& sys);

/// Real quadrature realization obtained by conjugating the
/// annihilation-creation form with V. Cross-checks C, B, D against their
/// explicit Re/Im block formulas and A against JJ H - 1/2 C^sharp C; throws
/// ConsistencyError if any imaginary residue or mismatch exceeds `tol`.
QuadRealization quad_realization(const QuantumLinearSystem& sys,
                                 double tol = kEqualityTol);

/// JJ_n V_n Omega V_n^dagger as a real matrix.
RMatrix quadrature_hamiltonian(const QuantumLinearSystem& sys);

}  // namespace linqs
