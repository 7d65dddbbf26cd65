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

#include "linqs/xferfn.hpp"

#include <algorithm>
#include <cmath>

namespace linqs {

std::vector<double> FrequencyGrid::omegas() const {
  if (points < 1 || !(omega_min > 0.0) || !(omega_max >= omega_min)) {
    throw PreconditionError("frequency grid needs points >= 1 and 0 < wmin <= wmax");
  }
  std::vector<double> w(points);
  if (points == 1) {
    w[0] = omega_min;
    return w;
  }
  const double lo = std::log10(omega_min);
  const double hi = std::log10(omega_max);
  for (int k = 0; k < points; ++k) {
    w[k] = std::pow(10.0, lo + (hi - lo) * k / (points - 1));
  }
  return w;
}

const char* to_string(BlockStatus s) {
  return s == BlockStatus::zero ? "Zero" : "NonZero";
}

namespace {

struct BlockNorms {
  double qq = 0, qp = 0, pq = 0, pp = 0;

  template <typename Derived>
  void absorb(const Eigen::MatrixBase<Derived>& g, Index m) {
    qq = std::max(qq, norm_inf(g.topLeftCorner(m, m)));
    qp = std::max(qp, norm_inf(g.topRightCorner(m, m)));
    pq = std::max(pq, norm_inf(g.bottomLeftCorner(m, m)));
    pp = std::max(pp, norm_inf(g.bottomRightCorner(m, m)));
  }
};

}  // namespace

BlockPattern block_pattern(const QuadRealization& r,
                           const BlockPatternOptions& opts) {
  if (r.form != Form::quadrature) {
    throw PreconditionError("block_pattern needs a quadrature realization");
  }
  if (r.D.rows() % 2 != 0 || r.D.rows() != r.D.cols()) {
    throw DimensionError("block_pattern: D must be 2m x 2m");
  }
  const Index m = r.D.rows() / 2;
  const int horizon =
      opts.markov_horizon.value_or(static_cast<int>(2 * r.states()));

  BlockPattern out;
  out.tol = opts.tol;
  out.markov_horizon = horizon;
  out.scale = std::max({1.0, norm_inf(r.A), norm_inf(r.B), norm_inf(r.C),
                        norm_inf(r.D)});

  const double sigma = std::max(1.0, norm_inf(r.A));
  QuadRealization scaled = r;
  scaled.A /= sigma;
  scaled.B /= std::sqrt(sigma);
  scaled.C /= std::sqrt(sigma);
  const double scaled_scale =
      std::max({1.0, norm_inf(scaled.A), norm_inf(scaled.B),
                norm_inf(scaled.C), norm_inf(scaled.D)});

  BlockNorms markov;
  for (const auto& h : markov_params(scaled, horizon + 1)) markov.absorb(h, m);
  BlockNorms freq;
  for (double w : opts.grid.omegas()) {
    freq.absorb(eval_tf(r, cdouble(0.0, w)), m);
  }

  // Markov norms are compared relative to the rescaled realization.
  const double markov_limit = opts.tol * scaled_scale;
  const double freq_limit = opts.tol * out.scale;
  auto cert = [&](double mk, double fr) {
    BlockCertificate c;
    c.max_markov = mk;
    c.max_frequency = fr;
    c.status = (mk <= markov_limit && fr <= freq_limit) ? BlockStatus::zero
                                                        : BlockStatus::nonzero;
    return c;
  };
  out.qq = cert(markov.qq, freq.qq);
  out.qp = cert(markov.qp, freq.qp);
  out.pq = cert(markov.pq, freq.pq);
  out.pp = cert(markov.pp, freq.pp);
  return out;
}

CMatrix sigma_tf(const QuantumLinearSystem& sys, cdouble s,
                 double max_condition) {
  const Index n = sys.modes;
  const cdouble i(0.0, 1.0);
  const CMatrix c = sys.coupling();
  const CMatrix pencil = s * CMatrix::Identity(2 * n, 2 * n) +
                         i * flat_metric(n).cast<cdouble>() * sys.hamiltonian();
  const Eigen::PartialPivLU<CMatrix> lu(pencil);
  const double rcond = lu.rcond();
  const double cond = rcond > 0.0 ? 1.0 / rcond : INFINITY;
  if (!(cond <= max_condition)) {
    throw SingularityError("sI + iJ Omega is singular, condition estimate " +
                               std::to_string(cond),
                           cond);
  }
  return 0.5 * c * lu.solve(flat_adjoint(c));
}

}  // namespace linqs
