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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linqs/bae.hpp"

namespace linqs {

/// A plant whose first m1 channels are external and whose last m2 channels
/// are fed back into themselves through a beamsplitter S_b:
///   L_1 = k11 a + k12 a^#,  L_2 = k21 a + k22 a^#.
struct FeedbackNetwork {
  QuantumLinearSystem plant;  // C_minus = [k11; k21], C_plus = [k12; k22]
  Index m1 = 0;
  Index m2 = 0;
  CMatrix S_b;  // m2 x m2, unitary

  CMatrix k11() const { return plant.C_minus.topRows(m1); }
  CMatrix k12() const { return plant.C_plus.topRows(m1); }
  CMatrix k21() const { return plant.C_minus.bottomRows(m2); }
  CMatrix k22() const { return plant.C_plus.bottomRows(m2); }
};

/// Assembles and validates a network. S_G defaults to the identity.
FeedbackNetwork make_network(const CMatrix& Omega_minus,
                             const CMatrix& Omega_plus, const CMatrix& k11,
                             const CMatrix& k12, const CMatrix& k21,
                             const CMatrix& k22, const CMatrix& S_b,
                             std::optional<CMatrix> S_G = std::nullopt,
                             double tol = kDefaultTol);

/// Condition number of I - S22 S_b; above kMaxResolventCondition the loop
/// is ill-posed.
double loop_condition(const FeedbackNetwork& net);

/// Reduced m1-channel system:
///   S_red = S11 + S12 S_b (I - S22 S_b)^{-1} S21,
///   C-_red = k11 + S12 S_b (I - S22 S_b)^{-1} k21 (C+_red likewise),
/// and the Hamiltonian of the closed loop, H + Im{L1^dag S'12 (I-S'22)^{-1}
/// L2'} + Im{L2'^dag S'22 (I-S'22)^{-1} L2'} where ' denotes the plant with
/// the beamsplitter applied to its second output group.
/// Throws WellPosednessError for an ill-posed loop and StructureError when
/// the result fails validation.
QuantumLinearSystem reduce_network(const FeedbackNetwork& net,
                                   double tol = kDefaultTol);

/// Reduced Hamiltonian from the closed-form expressions
///   O-_bar = O- - i(k11^dag S_b k21 - k21^dag S_b^dag k11),
///   O+_bar = O+ - i(k11^dag S_b k22 - k21^dag S_b^dag k12),
/// with their Hermiticity/symmetry residuals. These keep only part of the
/// loop contribution; see reduce_network for the full reduction.
struct CrossTermHamiltonian {
  CMatrix Omega_minus;
  CMatrix Omega_plus;
  double hermitian_residual = 0.0;
  double symmetric_residual = 0.0;
};

CrossTermHamiltonian cross_term_hamiltonian(const FeedbackNetwork& net);

struct ReductionCheck {
  double max_deviation = 0.0;  // relative to max(||G||, 1) per frequency
  std::vector<double> omegas;
  bool passed = false;
  double tol = 0.0;
};

/// Closes the loop u2 = Sb_q y2 on the plant's quadrature transfer function
/// at each grid frequency and compares with the reduced system.
ReductionCheck verify_reduction(const FeedbackNetwork& net,
                                double tol = 1e-9,
                                FrequencyGrid grid = {1e-2, 1e2, 16});

struct SearchConfig {
  int starts = 64;
  int iterations = 200;
  double threshold = 1e-20;
  double initial_step = 0.5;
  std::uint64_t seed = 1;
  int threads = 1;
  /// Plant scattering matrix; identity when absent.
  std::optional<CMatrix> S_G;
  /// Hold the external couplings fixed and search only k21, k22.
  std::optional<CMatrix> k11;
  std::optional<CMatrix> k12;
};

struct DesignCandidate {
  CMatrix S_b;
  CMatrix k11, k12, k21, k22;
  double objective = 0.0;
  QuantumLinearSystem reduced;
  BAEReport bae;
};

struct DesignResult {
  std::vector<DesignCandidate> candidates;
  double best_objective = INFINITY;
  double best_start_objective = INFINITY;  // before local refinement
  std::string diagnostic;
};

/// J = ||Re O-_bar||^2 + ||Re O+_bar||^2 + min(||Im C_bar||^2, ||Re C_bar||^2)
/// for a network.
double design_objective(const FeedbackNetwork& net);

/// Multi-start pattern search over the couplings for each beamsplitter in
/// `S_b_candidates`. A candidate is returned only when J is below the
/// threshold, the reduced system matches a bilateral condition and its
/// predicted pairs are certified.
DesignResult design_couplings(const CMatrix& Omega_minus,
                              const CMatrix& Omega_plus, Index m1, Index m2,
                              const std::vector<CMatrix>& S_b_candidates,
                              const SearchConfig& cfg = {});

/// {I, iI, -iI} of size m2.
std::vector<CMatrix> default_beamsplitters(Index m2);

}  // namespace linqs
