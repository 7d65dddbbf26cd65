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

#include "linqs/bae.hpp"

#include <algorithm>

namespace linqs {

std::string to_string(QuadraturePair p) {
  auto name = [](Quadrature x) { return x == Quadrature::q ? "q" : "p"; };
  return std::string("(") + name(p.output) + "_out, " + name(p.input) + "_in)";
}

std::string_view to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::omega_imaginary: return "Omega purely imaginary";
    case Hypothesis::coupling_real: return "C real";
    case Hypothesis::coupling_imaginary: return "C purely imaginary";
    case Hypothesis::s_real: return "S real";
    case Hypothesis::s_imaginary: return "S purely imaginary";
    case Hypothesis::omega_real_parts_equal: return "Re(Omega-) = Re(Omega+)";
    case Hypothesis::omega_real_parts_opposite: return "Re(Omega-) = -Re(Omega+)";
    case Hypothesis::c_minus_equals_c_plus: return "C- = C+";
    case Hypothesis::c_minus_equals_minus_c_plus: return "C- = -C+";
  }
  return "?";
}

namespace {

constexpr QuadraturePair kQP{Quadrature::q, Quadrature::p};
constexpr QuadraturePair kPQ{Quadrature::p, Quadrature::q};
constexpr QuadraturePair kQQ{Quadrature::q, Quadrature::q};
constexpr QuadraturePair kPP{Quadrature::p, Quadrature::p};

using H = Hypothesis;

// ||x - y|| <= tol * max(||x||, ||y||); two zeros are equal.
bool rel_equal(const CMatrix& x, const CMatrix& y, double tol) {
  return norm_inf(x - y) <= tol * std::max(norm_inf(x), norm_inf(y));
}

}  // namespace

HypothesisValues evaluate_hypotheses(const QuantumLinearSystem& sys,
                                     double tol) {
  HypothesisValues v;
  const CMatrix c = sys.coupling();
  const CMatrix omega = sys.hamiltonian();
  v[H::omega_imaginary] = is_imaginary(omega, tol);
  v[H::coupling_real] = is_real(c, tol);
  v[H::coupling_imaginary] = is_imaginary(c, tol);
  v[H::s_real] = is_real(sys.S, tol);
  v[H::s_imaginary] = is_imaginary(sys.S, tol);
  const CMatrix re_minus = sys.Omega_minus.real().cast<cdouble>();
  const CMatrix re_plus = sys.Omega_plus.real().cast<cdouble>();
  v[H::omega_real_parts_equal] = rel_equal(re_minus, re_plus, tol);
  v[H::omega_real_parts_opposite] = rel_equal(re_minus, -re_plus, tol);
  v[H::c_minus_equals_c_plus] = rel_equal(sys.C_minus, sys.C_plus, tol);
  v[H::c_minus_equals_minus_c_plus] = rel_equal(sys.C_minus, -sys.C_plus, tol);
  return v;
}

const std::vector<ConditionEntry>& condition_catalog() {
  static const std::vector<ConditionEntry> table = {
      {"diagonal_closed_form",
       "Omega imaginary, S and C real: block-diagonal G with closed form",
       {H::omega_imaginary, H::s_real, H::coupling_real},
       {kQP, kPQ}},
      {"bilateral_cross_real_coupling",
       "S real, Omega imaginary, C real",
       {H::omega_imaginary, H::s_real, H::coupling_real},
       {kQP, kPQ}},
      {"bilateral_cross_imaginary_coupling",
       "S real, Omega imaginary, C imaginary",
       {H::omega_imaginary, H::s_real, H::coupling_imaginary},
       {kQP, kPQ}},
      {"bilateral_direct_real_coupling",
       "S imaginary, Omega imaginary, C real",
       {H::omega_imaginary, H::s_imaginary, H::coupling_real},
       {kQQ, kPP}},
      {"bilateral_direct_imaginary_coupling",
       "S imaginary, Omega imaginary, C imaginary",
       {H::omega_imaginary, H::s_imaginary, H::coupling_imaginary},
       {kQQ, kPP}},
      {"unilateral_equal_re_real_s_real_c",
       "Re(O-) = Re(O+), S real, C real: block lower triangular",
       {H::omega_real_parts_equal, H::s_real, H::coupling_real},
       {kQP}},
      {"unilateral_equal_re_real_s_imaginary_c",
       "Re(O-) = Re(O+), S real, C imaginary: block upper triangular",
       {H::omega_real_parts_equal, H::s_real, H::coupling_imaginary},
       {kPQ}},
      {"unilateral_equal_re_imaginary_s_real_c",
       "Re(O-) = Re(O+), S imaginary, C real: (q, q) block zero",
       {H::omega_real_parts_equal, H::s_imaginary, H::coupling_real},
       {kQQ}},
      {"unilateral_equal_re_imaginary_s_imaginary_c",
       "Re(O-) = Re(O+), S imaginary, C imaginary: (p, p) block zero",
       {H::omega_real_parts_equal, H::s_imaginary, H::coupling_imaginary},
       {kPP}},
      {"unilateral_opposite_re_real_s_real_c",
       "Re(O-) = -Re(O+), S real, C real: block upper triangular",
       {H::omega_real_parts_opposite, H::s_real, H::coupling_real},
       {kPQ}},
      {"unilateral_opposite_re_real_s_imaginary_c",
       "Re(O-) = -Re(O+), S real, C imaginary: block lower triangular",
       {H::omega_real_parts_opposite, H::s_real, H::coupling_imaginary},
       {kQP}},
      {"unilateral_opposite_re_imaginary_s_real_c",
       "Re(O-) = -Re(O+), S imaginary, C real: (p, p) block zero",
       {H::omega_real_parts_opposite, H::s_imaginary, H::coupling_real},
       {kPP}},
      {"unilateral_opposite_re_imaginary_s_imaginary_c",
       "Re(O-) = -Re(O+), S imaginary, C imaginary: (q, q) block zero",
       {H::omega_real_parts_opposite, H::s_imaginary, H::coupling_imaginary},
       {kQQ}},
      {"q_coupling_imaginary",
       "S real, C imaginary, C- = C+ (any Omega)",
       {H::s_real, H::coupling_imaginary, H::c_minus_equals_c_plus},
       {kQP}},
      {"p_coupling_imaginary",
       "S real, C imaginary, C- = -C+ (any Omega)",
       {H::s_real, H::coupling_imaginary, H::c_minus_equals_minus_c_plus},
       {kPQ}},
  };
  return table;
}

std::vector<MatchedCondition> diagnose_conditions(
    const QuantumLinearSystem& sys, double tol) {
  const HypothesisValues v = evaluate_hypotheses(sys, tol);
  std::vector<MatchedCondition> out;
  for (const auto& entry : condition_catalog()) {
    const bool all = std::all_of(entry.hypotheses.begin(),
                                 entry.hypotheses.end(),
                                 [&](Hypothesis h) { return v[h]; });
    if (!all) continue;
    MatchedCondition mc;
    mc.id = entry.id;
    for (Hypothesis h : entry.hypotheses) {
      mc.hypotheses_checked.emplace_back(to_string(h));
    }
    mc.predicted_pairs = entry.predicts;
    out.push_back(std::move(mc));
  }
  return out;
}

BAEReport certify_bae(const QuantumLinearSystem& sys, double tol) {
  BAEReport rep;
  rep.tol = tol;
  BlockPatternOptions opts;
  opts.tol = tol;
  rep.pattern = block_pattern(quad_realization(sys), opts);
  if (rep.pattern.qp.zero()) rep.certified_pairs.push_back(kQP);
  if (rep.pattern.pq.zero()) rep.certified_pairs.push_back(kPQ);
  if (rep.pattern.qq.zero()) rep.certified_pairs.push_back(kQQ);
  if (rep.pattern.pp.zero()) rep.certified_pairs.push_back(kPP);

  // Hypotheses are judged at the looser of the two tolerances.
  rep.matched_conditions = diagnose_conditions(sys, std::max(tol, kDefaultTol));
  for (const auto& mc : rep.matched_conditions) {
    for (const auto& pair : mc.predicted_pairs) {
      if (std::find(rep.certified_pairs.begin(), rep.certified_pairs.end(),
                    pair) == rep.certified_pairs.end()) {
        rep.consistency = false;
      }
    }
  }
  return rep;
}

DiagonalTransfer closed_form_diag_tf(const QuantumLinearSystem& sys, cdouble s,
                                     double tol) {
  const HypothesisValues v = evaluate_hypotheses(sys, tol);
  if (!v[H::omega_imaginary] || !v[H::s_real] || !v[H::coupling_real]) {
    throw PreconditionError(
        "closed_form_diag_tf needs Omega purely imaginary and S, C real");
  }
  const Index n = sys.modes;
  const cdouble i(0.0, 1.0);
  const CMatrix cq = (sys.C_minus + sys.C_plus).real().cast<cdouble>();
  const CMatrix cp = (sys.C_minus - sys.C_plus).real().cast<cdouble>();
  const CMatrix sr = sys.S.real().cast<cdouble>();
  const CMatrix id = CMatrix::Identity(n, n);

  auto block = [&](const CMatrix& out_c, const CMatrix& in_c,
                   const CMatrix& omega) {
    const CMatrix pencil =
        s * id + i * omega + 0.5 * in_c.transpose() * out_c;
    const Eigen::PartialPivLU<CMatrix> lu(pencil);
    const double rc = lu.rcond();
    const double cond = rc > 0.0 ? 1.0 / rc : INFINITY;
    if (!(cond <= kMaxResolventCondition)) {
      throw SingularityError("closed_form_diag_tf: singular resolvent", cond);
    }
    return CMatrix(sr - out_c * lu.solve(in_c.transpose()) * sr);
  };
  return {block(cq, cp, sys.Omega_minus + sys.Omega_plus),
          block(cp, cq, sys.Omega_minus - sys.Omega_plus)};
}

}  // namespace linqs
