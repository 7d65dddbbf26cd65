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

#include <string>
#include <string_view>
#include <vector>

#include "linqs/xferfn.hpp"

namespace linqs {

enum class Quadrature { q, p };

/// (output quadrature, input quadrature) with identically zero transfer.
struct QuadraturePair {
  Quadrature output;
  Quadrature input;
  friend bool operator==(const QuadraturePair&, const QuadraturePair&) = default;
};

std::string to_string(QuadraturePair p);  // e.g. "(q_out, p_in)"

/// Structural hypotheses on (S, Omega, C) tested with relative tolerance.
enum class Hypothesis {
  omega_imaginary,
  coupling_real,
  coupling_imaginary,
  s_real,
  s_imaginary,
  omega_real_parts_equal,
  omega_real_parts_opposite,
  c_minus_equals_c_plus,
  c_minus_equals_minus_c_plus,
};

std::string_view to_string(Hypothesis h);

/// Truth value of each hypothesis for one system.
struct HypothesisValues {
  bool values[9] = {};
  bool operator[](Hypothesis h) const { return values[static_cast<int>(h)]; }
  bool& operator[](Hypothesis h) { return values[static_cast<int>(h)]; }
};

HypothesisValues evaluate_hypotheses(const QuantumLinearSystem& sys,
                                     double tol = kDefaultTol);

/// One sufficient condition: all `hypotheses` hold => every pair in
/// `predicts` has zero transfer.
struct ConditionEntry {
  std::string_view id;
  std::string_view summary;
  std::vector<Hypothesis> hypotheses;
  std::vector<QuadraturePair> predicts;
};

/// The sufficient-condition table (bilateral, unilateral and coupling-type
/// cases).
const std::vector<ConditionEntry>& condition_catalog();

struct MatchedCondition {
  std::string id;
  std::vector<std::string> hypotheses_checked;
  std::vector<QuadraturePair> predicted_pairs;
};

std::vector<MatchedCondition> diagnose_conditions(
    const QuantumLinearSystem& sys, double tol = kDefaultTol);

struct BAEReport {
  std::vector<QuadraturePair> certified_pairs;
  std::vector<MatchedCondition> matched_conditions;
  bool consistency = true;
  BlockPattern pattern;
  double tol = 0.0;
};

/// Certifies zero blocks of the quadrature transfer function and checks
/// every matched condition's prediction against them.
BAEReport certify_bae(const QuantumLinearSystem& sys, double tol = 1e-10);

struct DiagonalTransfer {
  CMatrix g_q;
  CMatrix g_p;
};

/// Closed-form diagonal blocks for Omega purely imaginary, S and C real:
///   G_q = S - Cq [sI + i(O- + O+) + 1/2 Cp^T Cq]^{-1} Cp^T S
///   G_p = S - Cp [sI + i(O- - O+) + 1/2 Cq^T Cp]^{-1} Cq^T S
/// with Cq = C- + C+, Cp = C- - C+.
DiagonalTransfer closed_form_diag_tf(const QuantumLinearSystem& sys, cdouble s,
                                     double tol = kDefaultTol);

}  // namespace linqs
