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

#include "linqs/qnd.hpp"

#include <algorithm>
#include <cmath>

#include "linqs/bae.hpp"

namespace linqs {
namespace {

const cdouble kI(0.0, 1.0);

bool rel_equal(const CMatrix& x, const CMatrix& y, double tol) {
  return norm_inf(x - y) <= tol * std::max(norm_inf(x), norm_inf(y));
}

CMatrix concat(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

// Exchanges the a and a^# halves of a 2n vector: breve(a)^# = P breve(a).
RMatrix swap_halves(Index n) {
  RMatrix p = RMatrix::Zero(2 * n, 2 * n);
  p.topRightCorner(n, n).setIdentity();
  p.bottomLeftCorner(n, n).setIdentity();
  return p;
}

double scale_of(const QuantumLinearSystem& sys) {
  return std::max(norm_inf(sys.coupling()) * norm_inf(sys.hamiltonian()), 1.0);
}

void require_resolvent(const Eigen::PartialPivLU<CMatrix>& lu,
                       const char* what) {
  const double rc = lu.rcond();
  const double cond = rc > 0.0 ? 1.0 / rc : INFINITY;
  if (!(cond <= kMaxResolventCondition)) {
    throw SingularityError(std::string(what) + ": singular factor", cond);
  }
}

// (s + a x)(s + b x)^{-1}
CMatrix mobius(cdouble s, const CMatrix& x, double a, double b) {
  const CMatrix id = CMatrix::Identity(x.rows(), x.cols());
  const Eigen::PartialPivLU<CMatrix> lu(s * id + b * x);
  require_resolvent(lu, "special_case_tf");
  // (s + a x) and (s + b x)^{-1} commute.
  return lu.solve(s * id + a * x);
}

CMatrix block_diag(const CMatrix& a, const CMatrix& b) {
  CMatrix out = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace

double CommutatorCoefficients::norm() const {
  return norm_inf(concat(coeff_a, coeff_adag));
}

CommutatorCoefficients commutator_coeffs(const QuantumLinearSystem& sys,
                                         const CMatrix& m, const CMatrix& n) {
  if (m.rows() != n.rows() || m.cols() != sys.modes ||
      n.cols() != sys.modes) {
    throw DimensionError("commutator_coeffs: M and N must be k x n");
  }
  // [K a, 1/2 a^dag O a] = 1/2 K ([a, a^dag] O a + [a, a^T] O^T a^#)
  // with [a, a^dag] = J, [a, a^T] = JJ and a^# = P a.
  const Index k = sys.modes;
  const CMatrix omega = sys.hamiltonian();
  const CMatrix gen =
      0.5 * (flat_metric(k).cast<cdouble>() * omega +
             symplectic_form(k).cast<cdouble>() * omega.transpose() *
                 swap_halves(k).cast<cdouble>());
  const CMatrix row = concat(m, n) * gen;
  return {row.leftCols(k), row.rightCols(k)};
}

CommutatorCoefficients commutator_coeffs(const QuantumLinearSystem& sys) {
  return commutator_coeffs(sys, sys.C_minus, sys.C_plus);
}

QndInteraction qnd_interaction(const QuantumLinearSystem& sys, double tol) {
  QndInteraction out;
  out.tol = tol;
  out.scale = scale_of(sys);
  out.commutator_residual = commutator_coeffs(sys).norm();
  out.equation_residual =
      norm_inf(concat(sys.C_minus * sys.Omega_minus -
                          sys.C_plus * sys.Omega_plus.adjoint(),
                      sys.C_minus * sys.Omega_plus -
                          sys.C_plus * sys.Omega_minus.transpose()));
  const CMatrix omega = sys.hamiltonian();
  const CMatrix lhs = sys.coupling() * omega;
  const CMatrix rhs =
      2.0 * delta(sys.C_minus, CMatrix::Zero(sys.channels, sys.modes)) * omega;
  out.doubled_residual = norm_inf(lhs - rhs);
  out.coupling_hamiltonian_residual = norm_inf(lhs);

  const double limit = tol * out.scale;
  const double spread =
      std::max({out.commutator_residual, out.equation_residual,
                out.doubled_residual}) -
      std::min({out.commutator_residual, out.equation_residual,
                out.doubled_residual});
  if (spread > limit) {
    throw ConsistencyError(
        "[L, H] = 0 forms disagree: commutator " +
        std::to_string(out.commutator_residual) + ", equations " +
        std::to_string(out.equation_residual) + ", doubled-up " +
        std::to_string(out.doubled_residual));
  }
  out.holds = out.equation_residual <= limit;
  return out;
}

bool is_qnd_interaction(const QuantumLinearSystem& sys, double tol) {
  return qnd_interaction(sys, tol).holds;
}

CouplingProperties coupling_properties(const QuantumLinearSystem& sys,
                                       double tol) {
  CouplingProperties out;
  out.self_adjoint = approx_equal(sys.C_minus, sys.C_plus.conjugate(), tol);
  const CMatrix prod = sys.C_minus * sys.C_plus.transpose();
  out.mutually_commuting = approx_equal(prod, prod.transpose(), tol);
  return out;
}

const char* to_string(SisoQuadrature q) {
  switch (q) {
    case SisoQuadrature::q: return "q";
    case SisoQuadrature::p: return "p";
    case SisoQuadrature::none: return "none";
  }
  return "?";
}

cdouble SisoAnalysis::tf_at(cdouble s) const {
  if (!unit_scattering) {
    throw PreconditionError("SISO closed form needs S = 1");
  }
  return (s - g / 2.0) / (s + g / 2.0);
}

SisoAnalysis siso_analysis(const QuantumLinearSystem& sys, double tol) {
  if (sys.channels != 1) {
    throw PreconditionError("siso_analysis: needs exactly one channel, got " +
                            std::to_string(sys.channels));
  }
  SisoAnalysis out;
  out.g = sys.C_minus.squaredNorm() - sys.C_plus.squaredNorm();
  out.unit_scattering = std::abs(sys.S(0, 0) - 1.0) <= tol;
  const double limit = tol * scale_of(sys);
  // L + L^# = (C- + C+^#) a + (C+ + C-^#) a^#, and likewise for L - L^#.
  const CMatrix sum_a = sys.C_minus + sys.C_plus.conjugate();
  const CMatrix diff_a = sys.C_minus - sys.C_plus.conjugate();
  out.q_commutes =
      commutator_coeffs(sys, sum_a, sum_a.conjugate()).norm() <= limit;
  out.p_commutes =
      commutator_coeffs(sys, diff_a, -diff_a.conjugate()).norm() <= limit;
  if (out.q_commutes) {
    out.which_quadrature = SisoQuadrature::q;
  } else if (out.p_commutes) {
    out.which_quadrature = SisoQuadrature::p;
  }
  return out;
}

const char* to_string(SpecialCase c) {
  switch (c) {
    case SpecialCase::c_plus_zero: return "Cplus_zero";
    case SpecialCase::c_minus_zero: return "Cminus_zero";
    case SpecialCase::omega_plus_zero: return "Omegaplus_zero";
    case SpecialCase::omega_minus_zero: return "Omegaminus_zero";
  }
  return "?";
}

CMatrix special_case_tf(const QuantumLinearSystem& sys, SpecialCase c,
                        cdouble s, double tol) {
  const Index m = sys.channels;
  if (!approx_equal(sys.S, CMatrix::Identity(m, m), tol)) {
    throw PreconditionError("special_case_tf: needs S = I");
  }
  if (!is_qnd_interaction(sys, tol)) {
    throw PreconditionError("special_case_tf: needs [L, H] = 0");
  }
  const double cscale = std::max(norm_inf(sys.coupling()), 1.0);
  const double hscale = std::max(norm_inf(sys.hamiltonian()), 1.0);
  auto vanishes = [&](const CMatrix& x, double scale, const char* name) {
    if (norm_inf(x) > tol * scale) {
      throw PreconditionError(std::string("special_case_tf: needs ") + name +
                              " = 0");
    }
  };
  const CMatrix& cm = sys.C_minus;
  const CMatrix& cp = sys.C_plus;
  switch (c) {
    case SpecialCase::c_plus_zero: {
      vanishes(cp, cscale, "C_plus");
      return block_diag(mobius(s, cm * cm.adjoint(), -0.5, 0.5),
                        mobius(s, cm.conjugate() * cm.transpose(), -0.5, 0.5));
    }
    case SpecialCase::c_minus_zero: {
      vanishes(cm, cscale, "C_minus");
      return block_diag(mobius(s, cp * cp.adjoint(), 0.5, -0.5),
                        mobius(s, cp.conjugate() * cp.transpose(), 0.5, -0.5));
    }
    case SpecialCase::omega_plus_zero:
    case SpecialCase::omega_minus_zero: {
      if (c == SpecialCase::omega_plus_zero) {
        vanishes(sys.Omega_plus, hscale, "Omega_plus");
      } else {
        vanishes(sys.Omega_minus, hscale, "Omega_minus");
      }
      if (!coupling_properties(sys, tol).mutually_commuting) {
        throw PreconditionError(
            "special_case_tf: needs C_minus C_plus^T symmetric");
      }
      const CMatrix x = cm * cm.adjoint() - cp * cp.adjoint();
      const CMatrix y =
          cp.conjugate() * cp.transpose() - cm.conjugate() * cm.transpose();
      return block_diag(mobius(s, x, -0.5, 0.5), mobius(s, y, 0.5, -0.5));
    }
  }
  throw PreconditionError("special_case_tf: unknown case");
}

CMatrix quadrature_coupling(const QuantumLinearSystem& sys) {
  return concat(sys.C_minus, sys.C_plus) *
         quadrature_transform(sys.modes).adjoint();
}

CMatrix quadrature_commutator(const QuantumLinearSystem& sys) {
  return quadrature_coupling(sys) *
         quadrature_hamiltonian(sys).cast<cdouble>();
}

Index observability_rank(const CMatrix& a, const CMatrix& c, double tol) {
  const Index n = a.rows();
  if (a.cols() != n || c.cols() != n) {
    throw DimensionError("observability_rank: A must be n x n, C k x n");
  }
  if (n == 0) return 0;
  CMatrix obs(c.rows() * n, n);
  CMatrix ca = c;
  for (Index k = 0; k < n; ++k) {
    obs.middleRows(k * c.rows(), c.rows()) = ca;
    ca = ca * a;
  }
  if (obs.size() == 0) return 0;
  const Eigen::JacobiSVD<CMatrix> svd(obs);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double threshold = tol * sv(0);
  return static_cast<Index>((sv.array() > threshold).count());
}

QNDVariableReport qnd_variable_report(const QuantumLinearSystem& sys,
                                      double tol) {
  QNDVariableReport rep;
  rep.tol = tol;
  rep.case_matched = "no_case";
  const Index n = sys.modes;

  const QuadRealization r = quad_realization(sys);
  const double scale = std::max({norm_inf(r.A), norm_inf(r.B), 1.0});
  const bool q_rows = norm_inf(r.A.block(0, n, n, n)) <= tol * scale &&
                      norm_inf(r.B.topRows(n)) <= tol * scale;
  const bool p_rows = norm_inf(r.A.block(n, 0, n, n)) <= tol * scale &&
                      norm_inf(r.B.bottomRows(n)) <= tol * scale;

  const CMatrix& cm = sys.C_minus;
  const CMatrix& om = sys.Omega_minus;
  const CMatrix& op = sys.Omega_plus;
  auto witness = [&](const char* name, const CMatrix& a, const CMatrix& c) {
    return ObservabilityWitness{name, observability_rank(a, c, tol), n};
  };
  auto settle = [](QuadratureVerdict& v, bool rows) {
    v.structural_rows_zero = rows;
    const bool observable =
        std::any_of(v.witnesses.begin(), v.witnesses.end(),
                    [](const ObservabilityWitness& w) { return w.passed(); });
    v.is_qnd = rows && observable;
  };

  if (norm_inf(sys.coupling()) <= tol) return rep;

  const HypothesisValues hyp = evaluate_hypotheses(sys, tol);
  const bool bilateral_form =
      hyp[Hypothesis::omega_imaginary] &&
      (hyp[Hypothesis::s_real] || hyp[Hypothesis::s_imaginary]) &&
      (hyp[Hypothesis::coupling_real] || hyp[Hypothesis::coupling_imaginary]);
  const CMatrix im_om = om.imag().cast<cdouble>();

  if (hyp[Hypothesis::c_minus_equals_c_plus]) {
    if (rel_equal(om, op, tol)) {
      rep.case_matched = "q_coupling_equal_hamiltonian";
      rep.q.witnesses = {
          witness("(Im(Omega-), Im(C-))", im_om, cm.imag().cast<cdouble>()),
          witness("(Im(Omega-), Re(C-))", im_om, cm.real().cast<cdouble>())};
      settle(rep.q, q_rows);
      return rep;
    }
    if (bilateral_form) {
      rep.case_matched = "q_coupling_imaginary_hamiltonian";
      rep.q.witnesses = {witness("(i(Omega- + Omega+), C-)", kI * (om + op),
                                 cm)};
      settle(rep.q, q_rows);
      return rep;
    }
  }
  if (hyp[Hypothesis::c_minus_equals_minus_c_plus]) {
    if (rel_equal(om, -op, tol)) {
      rep.case_matched = "p_coupling_opposite_hamiltonian";
      rep.p.witnesses = {
          witness("(Im(Omega-), -Im(C-))", im_om, -cm.imag().cast<cdouble>()),
          witness("(Im(Omega-), Re(C-))", im_om, cm.real().cast<cdouble>())};
      settle(rep.p, p_rows);
      return rep;
    }
    if (bilateral_form) {
      rep.case_matched = "p_coupling_imaginary_hamiltonian";
      rep.p.witnesses = {witness("(i(Omega- - Omega+), C-)", kI * (om - op),
                                 cm)};
      settle(rep.p, p_rows);
      return rep;
    }
  }
  if (norm_inf(sys.C_plus) <= tol * norm_inf(cm) && is_real(cm, tol) &&
      rel_equal(om, op, tol)) {
    // Block-triangular transfer, but neither quadrature decouples from the
    // inputs.
    rep.case_matched = "bae_without_qnd";
    rep.q.structural_rows_zero = q_rows;
    rep.p.structural_rows_zero = p_rows;
  }
  return rep;
}

}  // namespace linqs
