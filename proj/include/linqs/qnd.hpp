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

#include <optional>
#include <string>
#include <vector>

#include "linqs/xferfn.hpp"

namespace linqs {

/// [X, H] = coeff_a a + coeff_adag a^# for X = M a + N a^#.
struct CommutatorCoefficients {
  CMatrix coeff_a;
  CMatrix coeff_adag;

  /// ||[coeff_a, coeff_adag]||, the row-concatenated residual.
  double norm() const;
};

/// Coefficients of [L, H].
CommutatorCoefficients commutator_coeffs(const QuantumLinearSystem& sys);

/// Coefficients of [M a + N a^#, H] for arbitrary M, N (m x n).
CommutatorCoefficients commutator_coeffs(const QuantumLinearSystem& sys,
                                         const CMatrix& m, const CMatrix& n);

/// The three equivalent forms of [L, H] = 0, each as a residual.
struct QndInteraction {
  bool holds = false;
  double commutator_residual = 0.0;  // from the quadratic-form commutator
  double equation_residual = 0.0;    // C-O- = C+O+^dag, C-O+ = C+O-^T
  double doubled_residual = 0.0;     // C Omega = 2 Delta(C-, 0) Omega
  double scale = 0.0;
  double tol = 0.0;
  /// ||C Omega|| as a diagnostic only.
  double coupling_hamiltonian_residual = 0.0;
};

/// Evaluates all three forms; throws ConsistencyError when they disagree by
/// more than tol*scale, with scale = max(||C|| ||Omega||, 1).
QndInteraction qnd_interaction(const QuantumLinearSystem& sys,
                               double tol = 1e-10);

bool is_qnd_interaction(const QuantumLinearSystem& sys, double tol = 1e-10);

struct CouplingProperties {
  bool self_adjoint = false;       // C- = C+^#, i.e. L = L^#
  bool mutually_commuting = false;  // C- C+^T symmetric
};

CouplingProperties coupling_properties(const QuantumLinearSystem& sys,
                                       double tol = kDefaultTol);

enum class SisoQuadrature { q, p, none };

const char* to_string(SisoQuadrature q);

struct SisoAnalysis {
  double g = 0.0;  // sum |C-_j|^2 - |C+_j|^2
  bool q_commutes = false;  // [L + L^#, H] = 0
  bool p_commutes = false;  // [L - L^#, H] = 0
  SisoQuadrature which_quadrature = SisoQuadrature::none;
  bool unit_scattering = false;  // S = 1

  /// (s - g/2)/(s + g/2), the matching diagonal quadrature entry of G.
  /// Throws PreconditionError unless S = 1.
  cdouble tf_at(cdouble s) const;
};

/// Requires a single channel; throws PreconditionError otherwise.
SisoAnalysis siso_analysis(const QuantumLinearSystem& sys, double tol = 1e-10);

enum class SpecialCase { c_plus_zero, c_minus_zero, omega_plus_zero,
                         omega_minus_zero };

const char* to_string(SpecialCase c);

/// Closed-form annihilation-creation transfer function for the special
/// cases of [L, H] = 0 with S = I. Cases with a vanishing Hamiltonian block
/// also need C- C+^T symmetric. Throws PreconditionError on violated
/// hypotheses.
CMatrix special_case_tf(const QuantumLinearSystem& sys, SpecialCase c,
                        cdouble s, double tol = 1e-10);

/// L = Lambda x with Lambda = (1/sqrt 2)[C- + C+, i(C- - C+)].
CMatrix quadrature_coupling(const QuantumLinearSystem& sys);

/// Lambda JJ H; zero iff [L, H] = 0.
CMatrix quadrature_commutator(const QuantumLinearSystem& sys);

/// Numerical rank of [C; CA; ...; CA^{n-1}] with threshold tol * sigma_max.
Index observability_rank(const CMatrix& a, const CMatrix& c,
                         double tol = kDefaultTol);

struct ObservabilityWitness {
  std::string pair;  // e.g. "(Im(Omega-), Re(C-))"
  Index rank = 0;
  Index required = 0;
  bool passed() const { return rank == required; }
};

struct QuadratureVerdict {
  bool is_qnd = false;
  bool structural_rows_zero = false;  // state row of A and rows of B
  std::vector<ObservabilityWitness> witnesses;
};

struct QNDVariableReport {
  std::string case_matched;  // "no_case" when nothing applies
  QuadratureVerdict q;
  QuadratureVerdict p;
  double tol = 0.0;
};

QNDVariableReport qnd_variable_report(const QuantumLinearSystem& sys,
                                      double tol = kDefaultTol);

}  // namespace linqs
