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

#include "linqs/xferfn.hpp"

namespace linqs {

/// Controllable-and-observable block of a system in Kalman canonical form,
/// with 2r states and m channels. Rows of C_co and columns of B_co are
/// ordered (q, p).
struct KalmanCoSubsystem {
  RMatrix A_co;  // 2r x 2r
  RMatrix B_co;  // 2r x 2m
  RMatrix C_co;  // 2m x 2r
  std::optional<CMatrix> gamma_q;  // m x r
  std::optional<CMatrix> gamma_p;  // m x r
  /// Pass-through: a user-supplied nonzero Gamma_h signals QND variables.
  std::optional<bool> gamma_h_nonzero;

  Index channels() const { return C_co.rows() / 2; }
  Index half_states() const { return A_co.rows() / 2; }
};

/// C_co = sqrt(2) [[Re Gq, Re Gp], [Im Gq, Im Gp]] and B_co = -C_co^sharp
/// (the input matrix of the identity-feedthrough realization). A_co
/// defaults to B_co C_co / 2.
KalmanCoSubsystem kalman_from_gamma(const CMatrix& gamma_q,
                                    const CMatrix& gamma_p,
                                    std::optional<RMatrix> A_co = std::nullopt);

struct KalmanBAE {
  bool q_wrt_p = false;  // C_co,q B_co,p = 0
  bool p_wrt_q = false;  // C_co,p B_co,q = 0
  double qp_residual = 0.0;
  double pq_residual = 0.0;
  /// Only when Gamma blocks are given.
  std::optional<bool> re_gamma_q_re_gamma_p_symmetric;
  std::optional<bool> im_gamma_q_im_gamma_p_symmetric;
  std::optional<double> gamma_mismatch;  // ||C_co - C_co(Gamma)||
  /// Re(Gq Gp^T) symmetric; reported when both BAE verdicts hold.
  std::optional<bool> re_gamma_product_symmetric;
  std::optional<bool> qnd_variables;  // echoes gamma_h_nonzero
  double scale = 0.0;
  double tol = 0.0;
};

/// Throws DimensionError on inconsistent partitions.
KalmanBAE check_kalman_bae(const KalmanCoSubsystem& k, double tol = 1e-10);

struct MarkovIdentity {
  double premise_residual = 0.0;  // ||C A - 1/2 C B C||
  bool premise_holds = false;
  double max_residual = 0.0;  // max_k ||C A^k B - (C B)^{k+1} / 2^k||
  double scale = 0.0;
};

/// Checks C A^k B = (C B)^{k+1} / 2^k for k = 1..K.
MarkovIdentity markov_identity_check(const KalmanCoSubsystem& k, int K,
                                     double tol = 1e-10);

/// ||C_h A_h22 + C_co JJ A12^T + 1/2 C_co B_co JJ_m B_h^T||.
double first_condition_residual(const RMatrix& C_h, const RMatrix& A_h22,
                                const RMatrix& C_co, const RMatrix& A12,
                                const RMatrix& B_co, const RMatrix& B_h);

/// The co-subsystem as a quadrature realization with zero feedthrough.
QuadRealization as_realization(const KalmanCoSubsystem& k);

}  // namespace linqs
