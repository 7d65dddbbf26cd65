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

#include "linqs/qsys.hpp"

namespace linqs {

/// Resolvent condition numbers above this are treated as singular.
inline constexpr double kMaxResolventCondition = 1e12;

/// G[s] = D + C (sI - A)^{-1} B, solved by LU (never an explicit inverse).
/// Throws SingularityError when cond(sI - A) exceeds `max_condition`.
template <typename Scalar>
CMatrix eval_tf(const Realization<Scalar>& r, cdouble s,
                double max_condition = kMaxResolventCondition) {
  const Index k = r.states();
  const CMatrix d = r.D.template cast<cdouble>();
  if (k == 0) return d;
  const CMatrix pencil =
      s * CMatrix::Identity(k, k) - r.A.template cast<cdouble>();
  const Eigen::PartialPivLU<CMatrix> lu(pencil);
  const double rcond = lu.rcond();
  const double cond = rcond > 0.0 ? 1.0 / rcond : INFINITY;
  if (!(cond <= max_condition)) {
    throw SingularityError("sI - A is singular at s = (" +
                               std::to_string(s.real()) + ", " +
                               std::to_string(s.imag()) +
                               "), condition estimate " + std::to_string(cond),
                           cond);
  }
  return d + r.C.template cast<cdouble>() *
                 lu.solve(r.B.template cast<cdouble>());
}

/// K Markov parameters: [D, CB, CAB, ..., CA^{K-2}B].
template <typename Scalar>
std::vector<Matrix<Scalar>> markov_params(const Realization<Scalar>& r,
                                          int count) {
  if (count < 1) throw PreconditionError("markov_params: count must be >= 1");
  std::vector<Matrix<Scalar>> out;
  out.reserve(count);
  out.push_back(r.D);
  Matrix<Scalar> akb = r.B;
  for (int k = 1; k < count; ++k) {
    out.push_back(r.C * akb);
    akb = r.A * akb;
  }
  return out;
}

/// Log-spaced frequencies on the imaginary axis, s = i*omega.
struct FrequencyGrid {
  double omega_min = 1e-3;
  double omega_max = 1e3;
  int points = 32;

  std::vector<double> omegas() const;
};

enum class BlockStatus { zero, nonzero };

struct BlockCertificate {
  BlockStatus status = BlockStatus::nonzero;
  double max_markov = 0.0;     // largest block norm over the Markov data
  double max_frequency = 0.0;  // largest block norm over the grid

  bool zero() const { return status == BlockStatus::zero; }
};

/// Zero/non-zero certification of the four m x m blocks of a quadrature
/// transfer function, ordered (q_out, p_out) x (q_in, p_in).
struct BlockPattern {
  BlockCertificate qq, qp, pq, pp;
  double tol = 0.0;
  double scale = 0.0;
  int markov_horizon = 0;
};

struct BlockPatternOptions {
  double tol = 1e-10;
  FrequencyGrid grid{};
  /// Number of CA^kB terms; defaults to the Cayley-Hamilton horizon 2*(2n).
  std::optional<int> markov_horizon;
};

/// A block is Zero iff its part of D and of CA^kB (k < horizon) is within
/// tol*scale and its frequency samples are within tol*scale, where scale is
/// max(||A||, ||B||, ||C||, ||D||, 1). The Markov test runs on the
/// time-rescaled realization (A/sigma, B/sqrt(sigma), C/sqrt(sigma)),
/// sigma = max(||A||, 1), which has the same zero blocks and bounded powers.
BlockPattern block_pattern(const QuadRealization& r,
                           const BlockPatternOptions& opts = {});

/// Sigma[s] = 1/2 C (sI + i J_n Omega)^{-1} C^flat.
CMatrix sigma_tf(const QuantumLinearSystem& sys, cdouble s,
                 double max_condition = kMaxResolventCondition);

/// One row of a frequency sweep.
struct SweepPoint {
  double omega;
  CMatrix response;
};

template <typename Scalar>
std::vector<SweepPoint> frequency_sweep(const Realization<Scalar>& r,
                                        const FrequencyGrid& grid) {
  std::vector<SweepPoint> out;
  for (double w : grid.omegas()) {
    out.push_back({w, eval_tf(r, cdouble(0.0, w))});
  }
  return out;
}

const char* to_string(BlockStatus s);

}  // namespace linqs
