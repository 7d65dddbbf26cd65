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

#include "linqs/kalman.hpp"

#include <algorithm>
#include <cmath>

namespace linqs {
namespace {

void check_partitions(const KalmanCoSubsystem& k) {
  const Index m2 = k.C_co.rows();
  const Index r2 = k.A_co.rows();
  if (m2 % 2 != 0 || r2 % 2 != 0 || k.A_co.cols() != r2 ||
      k.C_co.cols() != r2 || k.B_co.rows() != r2 || k.B_co.cols() != m2) {
    throw DimensionError(
        "Kalman co-subsystem needs A 2r x 2r, B 2r x 2m, C 2m x 2r");
  }
  if (k.gamma_q.has_value() != k.gamma_p.has_value()) {
    throw DimensionError("Gamma_q and Gamma_p must be given together");
  }
  if (k.gamma_q) {
    const Index m = m2 / 2, r = r2 / 2;
    if (k.gamma_q->rows() != m || k.gamma_q->cols() != r ||
        k.gamma_p->rows() != m || k.gamma_p->cols() != r) {
      throw DimensionError("Gamma blocks must be m x r");
    }
  }
}

RMatrix c_from_gamma(const CMatrix& gq, const CMatrix& gp) {
  RMatrix c(2 * gq.rows(), 2 * gq.cols());
  c << gq.real(), gp.real(), gq.imag(), gp.imag();
  return std::sqrt(2.0) * c;
}

bool symmetric(const RMatrix& x, double tol) {
  return norm_inf(x - x.transpose()) <= tol * std::max(norm_inf(x), 1.0);
}

}  // namespace

KalmanCoSubsystem kalman_from_gamma(const CMatrix& gamma_q,
                                    const CMatrix& gamma_p,
                                    std::optional<RMatrix> A_co) {
  if (gamma_q.rows() != gamma_p.rows() || gamma_q.cols() != gamma_p.cols()) {
    throw DimensionError("kalman_from_gamma: Gamma blocks differ in shape");
  }
  KalmanCoSubsystem k;
  k.gamma_q = gamma_q;
  k.gamma_p = gamma_p;
  k.C_co = c_from_gamma(gamma_q, gamma_p);
  k.B_co = -sharp_adjoint(k.C_co);
  k.A_co = A_co ? *A_co : RMatrix(0.5 * k.B_co * k.C_co);
  check_partitions(k);
  return k;
}

KalmanBAE check_kalman_bae(const KalmanCoSubsystem& k, double tol) {
  check_partitions(k);
  const Index m = k.channels();
  KalmanBAE out;
  out.tol = tol;
  out.scale = std::max(norm_inf(k.C_co) * norm_inf(k.B_co), 1.0);
  const auto c_q = k.C_co.topRows(m);
  const auto c_p = k.C_co.bottomRows(m);
  const auto b_q = k.B_co.leftCols(m);
  const auto b_p = k.B_co.rightCols(m);
  out.qp_residual = norm_inf(c_q * b_p);
  out.pq_residual = norm_inf(c_p * b_q);
  out.q_wrt_p = out.qp_residual <= tol * out.scale;
  out.p_wrt_q = out.pq_residual <= tol * out.scale;

  if (k.gamma_q) {
    const CMatrix& gq = *k.gamma_q;
    const CMatrix& gp = *k.gamma_p;
    out.gamma_mismatch = norm_inf(k.C_co - c_from_gamma(gq, gp));
    out.re_gamma_q_re_gamma_p_symmetric =
        symmetric(gq.real() * gp.real().transpose(), tol);
    out.im_gamma_q_im_gamma_p_symmetric =
        symmetric(gq.imag() * gp.imag().transpose(), tol);
    if (out.q_wrt_p && out.p_wrt_q) {
      out.re_gamma_product_symmetric =
          symmetric((gq * gp.transpose()).real(), tol);
    }
  }
  out.qnd_variables = k.gamma_h_nonzero;
  return out;
}

MarkovIdentity markov_identity_check(const KalmanCoSubsystem& k, int K,
                                     double tol) {
  check_partitions(k);
  MarkovIdentity out;
  const RMatrix& a = k.A_co;
  const RMatrix& b = k.B_co;
  const RMatrix& c = k.C_co;
  out.scale = std::max({norm_inf(a), norm_inf(b), norm_inf(c), 1.0});
  out.premise_residual = norm_inf(c * a - 0.5 * c * b * c);
  out.premise_holds =
      out.premise_residual <= tol * out.scale * out.scale * out.scale;

  const RMatrix cb = c * b;
  RMatrix ak_b = b;     // A^k B
  RMatrix power = cb;   // (C B)^{k+1}
  double weight = 1.0;  // 2^{-k}
  for (int j = 1; j <= K; ++j) {
    ak_b = a * ak_b;
    power = power * cb;
    weight *= 0.5;
    const RMatrix cab = c * ak_b;
    const double ref = std::max({norm_inf(cab), weight * norm_inf(power), 1.0});
    out.max_residual =
        std::max(out.max_residual, norm_inf(cab - weight * power) / ref);
  }
  return out;
}

double first_condition_residual(const RMatrix& C_h, const RMatrix& A_h22,
                                const RMatrix& C_co, const RMatrix& A12,
                                const RMatrix& B_co, const RMatrix& B_h) {
  const RMatrix jj_r = symplectic_form(C_co.cols() / 2);
  const RMatrix jj_m = symplectic_form(B_co.cols() / 2);
  return norm_inf(C_h * A_h22 + C_co * jj_r * A12.transpose() +
                  0.5 * C_co * B_co * jj_m * B_h.transpose());
}

QuadRealization as_realization(const KalmanCoSubsystem& k) {
  check_partitions(k);
  QuadRealization r;
  r.form = Form::quadrature;
  r.A = k.A_co;
  r.B = k.B_co;
  r.C = k.C_co;
  r.D = RMatrix::Zero(k.C_co.rows(), k.B_co.cols());
  return r;
}

}  // namespace linqs
