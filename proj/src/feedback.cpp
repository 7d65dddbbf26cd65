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

#include "linqs/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace linqs {
namespace {

const cdouble kI(0.0, 1.0);

struct RawReduction {
  CMatrix S, C_minus, C_plus, Omega_minus, Omega_plus;
};

CMatrix identity_or(const std::optional<CMatrix>& x, Index m) {
  return x ? *x : CMatrix::Identity(m, m);
}

double condition(const CMatrix& x) {
  const Eigen::PartialPivLU<CMatrix> lu(x);
  const double rc = lu.rcond();
  return rc > 0.0 ? 1.0 / rc : INFINITY;
}

RawReduction reduce_raw(const FeedbackNetwork& net) {
  const QuantumLinearSystem& g = net.plant;
  const Index n = g.modes;
  const Index m1 = net.m1;
  const Index m2 = net.m2;
  const double cond = loop_condition(net);
  if (!(cond <= kMaxResolventCondition)) {
    throw WellPosednessError("feedback loop I - S22 S_b is singular", cond);
  }
  // Beamsplitter applied to the second output group.
  CMatrix fold = CMatrix::Identity(m1 + m2, m1 + m2);
  fold.bottomRightCorner(m2, m2) = net.S_b;
  const CMatrix s = fold * g.S;
  const CMatrix cm = fold * g.C_minus;
  const CMatrix cp = fold * g.C_plus;

  const CMatrix s_io = s.topRightCorner(m1, m2);
  const CMatrix s_oo = s.bottomRightCorner(m2, m2);
  const Eigen::PartialPivLU<CMatrix> loop(CMatrix::Identity(m2, m2) - s_oo);
  const CMatrix gain_io = s_io * loop.inverse();
  const CMatrix gain_oo = s_oo * loop.inverse();

  CMatrix k_in(m1, 2 * n), k_out(m2, 2 * n);
  k_in << cm.topRows(m1), cp.topRows(m1);
  k_out << cm.bottomRows(m2), cp.bottomRows(m2);

  RawReduction out;
  out.S = s.topLeftCorner(m1, m1) + gain_io * s.bottomLeftCorner(m2, m1);
  const CMatrix k_red = k_in + gain_io * k_out;
  out.C_minus = k_red.leftCols(n);
  out.C_plus = k_red.rightCols(n);

  // Im{X^dag M Y} with X = K_x breve(a) is breve(a)^dag W breve(a).
  const CMatrix q =
      k_in.adjoint() * gain_io * k_out + k_out.adjoint() * gain_oo * k_out;
  const CMatrix w = (q - q.adjoint()) / (2.0 * kI);
  CMatrix swap = CMatrix::Zero(2 * n, 2 * n);
  swap.topRightCorner(n, n).setIdentity();
  swap.bottomLeftCorner(n, n).setIdentity();
  const CMatrix added = w + swap * w.conjugate() * swap;
  out.Omega_minus = g.Omega_minus + added.topLeftCorner(n, n);
  out.Omega_plus = g.Omega_plus + added.topRightCorner(n, n);
  return out;
}

CMatrix channel_block(const CMatrix& g, const std::vector<Index>& rows,
                      const std::vector<Index>& cols) {
  CMatrix out(rows.size(), cols.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < cols.size(); ++j) out(i, j) = g(rows[i], cols[j]);
  }
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Search over the real and imaginary parts of the free couplings.
class CouplingSearch {
 public:
  CouplingSearch(const CMatrix& om, const CMatrix& op, Index m1, Index m2,
                 const CMatrix& s_b, const SearchConfig& cfg)
      : m1_(m1), m2_(m2), n_(om.rows()), cfg_(cfg) {
    net_.plant.modes = n_;
    net_.plant.channels = m1 + m2;
    net_.plant.S = identity_or(cfg.S_G, m1 + m2);
    net_.plant.Omega_minus = om;
    net_.plant.Omega_plus = op;
    net_.plant.C_minus = CMatrix::Zero(m1 + m2, n_);
    net_.plant.C_plus = CMatrix::Zero(m1 + m2, n_);
    net_.plant.C_minus.topRows(m1) =
        cfg.k11 ? *cfg.k11 : CMatrix::Ones(m1, n_);
    net_.plant.C_plus.topRows(m1) =
        cfg.k12 ? *cfg.k12 : CMatrix::Zero(m1, n_);
    net_.m1 = m1;
    net_.m2 = m2;
    net_.S_b = s_b;
  }

  Index dimension() const { return 4 * m2_ * n_; }

  FeedbackNetwork decode(const Eigen::VectorXd& x) const {
    FeedbackNetwork net = net_;
    const Index sz = m2_ * n_;
    for (Index j = 0; j < sz; ++j) {
      const Index r = m1_ + j / n_;
      const Index c = j % n_;
      net.plant.C_minus(r, c) = cdouble(x(j), x(sz + j));
      net.plant.C_plus(r, c) = cdouble(x(2 * sz + j), x(3 * sz + j));
    }
    return net;
  }

  double objective(const Eigen::VectorXd& x) const {
    return design_objective(decode(x));
  }

  // Residual vector whose squared norm is the objective on the branch
  // selected by `real_coupling`.
  Eigen::VectorXd residual(const Eigen::VectorXd& x, bool real_coupling) const {
    const RawReduction r = reduce_raw(decode(x));
    CMatrix c(r.C_minus.rows(), 2 * n_);
    c << r.C_minus, r.C_plus;
    const RMatrix pen = real_coupling ? RMatrix(c.imag()) : RMatrix(c.real());
    Eigen::VectorXd out(2 * n_ * n_ + pen.size());
    out << r.Omega_minus.real().reshaped(), r.Omega_plus.real().reshaped(),
        pen.reshaped();
    return out;
  }

  struct Outcome {
    Eigen::VectorXd x;
    double start_objective;
    double objective;
  };

  Outcome run(int start) const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dimension());
    if (start > 0) {
      std::mt19937_64 rng(splitmix64(cfg_.seed ^ splitmix64(start)));
      std::normal_distribution<double> normal(0.0, 1.0);
      for (Index i = 0; i < x.size(); ++i) x(i) = normal(rng);
    }
    Outcome out{x, objective(x), 0.0};
    double f = out.start_objective;
    pattern_search(x, f);
    polish(x, f);
    out.x = x;
    out.objective = f;
    return out;
  }

 private:
  void explore(Eigen::VectorXd& x, double& f, double h) const {
    for (Index i = 0; i < x.size(); ++i) {
      for (double dir : {1.0, -1.0}) {
        x(i) += dir * h;
        const double trial = objective(x);
        if (trial < f) {
          f = trial;
          break;
        }
        x(i) -= dir * h;
      }
    }
  }

  void pattern_search(Eigen::VectorXd& x, double& f) const {
    double h = cfg_.initial_step;
    for (int it = 0; it < cfg_.iterations && h > 1e-12; ++it) {
      Eigen::VectorXd y = x;
      double fy = f;
      explore(y, fy, h);
      if (fy < f) {
        Eigen::VectorXd z = 2.0 * y - x;
        double fz = objective(z);
        explore(z, fz, h);
        x = y;
        f = fy;
        if (fz < f) {
          x = z;
          f = fz;
        }
      } else {
        h *= 0.5;
      }
    }
  }

  // Gauss-Newton on the residual with a finite-difference Jacobian.
  void polish(Eigen::VectorXd& x, double& f) const {
    for (int it = 0; it < 30 && f > 0.0; ++it) {
      const RawReduction r = reduce_raw(decode(x));
      CMatrix c(r.C_minus.rows(), 2 * n_);
      c << r.C_minus, r.C_plus;
      const bool real_branch = c.imag().squaredNorm() <= c.real().squaredNorm();
      const Eigen::VectorXd r0 = residual(x, real_branch);
      RMatrix jac(r0.size(), x.size());
      for (Index i = 0; i < x.size(); ++i) {
        const double step = 1e-7 * std::max(1.0, std::abs(x(i)));
        Eigen::VectorXd xp = x;
        xp(i) += step;
        jac.col(i) = (residual(xp, real_branch) - r0) / step;
      }
      const Eigen::VectorXd dx =
          jac.completeOrthogonalDecomposition().solve(-r0);
      double t = 1.0;
      bool improved = false;
      for (int k = 0; k < 20; ++k, t *= 0.5) {
        const Eigen::VectorXd trial = x + t * dx;
        const double ft = objective(trial);
        if (ft < f) {
          x = trial;
          f = ft;
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
  }

  Index m1_, m2_, n_;
  SearchConfig cfg_;
  FeedbackNetwork net_;
};

bool is_bilateral(const std::string& id) {
  return id == "diagonal_closed_form" || id.rfind("bilateral_", 0) == 0;
}

}  // namespace

FeedbackNetwork make_network(const CMatrix& Omega_minus,
                             const CMatrix& Omega_plus, const CMatrix& k11,
                             const CMatrix& k12, const CMatrix& k21,
                             const CMatrix& k22, const CMatrix& S_b,
                             std::optional<CMatrix> S_G, double tol) {
  const Index m1 = k11.rows();
  const Index m2 = k21.rows();
  const Index n = Omega_minus.rows();
  if (k12.rows() != m1 || k22.rows() != m2 || k11.cols() != n ||
      k12.cols() != n || k21.cols() != n || k22.cols() != n) {
    throw DimensionError("make_network: coupling shapes disagree");
  }
  if (S_b.rows() != m2 || S_b.cols() != m2) {
    throw DimensionError("make_network: S_b must be m2 x m2");
  }
  if (norm_inf(S_b * S_b.adjoint() - CMatrix::Identity(m2, m2)) > tol) {
    throw ValidationError({{"S_b", "not unitary", 0.0}});
  }
  CMatrix cm(m1 + m2, n), cp(m1 + m2, n);
  cm << k11, k21;
  cp << k12, k22;
  FeedbackNetwork net;
  net.plant = make_system(identity_or(S_G, m1 + m2), cm, cp, Omega_minus,
                          Omega_plus, tol);
  net.m1 = m1;
  net.m2 = m2;
  net.S_b = S_b;
  return net;
}

double loop_condition(const FeedbackNetwork& net) {
  const CMatrix s22 = net.plant.S.bottomRightCorner(net.m2, net.m2);
  return condition(CMatrix::Identity(net.m2, net.m2) - s22 * net.S_b);
}

QuantumLinearSystem reduce_network(const FeedbackNetwork& net, double tol) {
  const RawReduction r = reduce_raw(net);
  QuantumLinearSystem out;
  out.modes = net.plant.modes;
  out.channels = net.m1;
  out.S = r.S;
  out.C_minus = r.C_minus;
  out.C_plus = r.C_plus;
  out.Omega_minus = r.Omega_minus;
  out.Omega_plus = r.Omega_plus;
  std::vector<Violation> v = validate(out, tol);
  if (!v.empty()) throw StructureError(std::move(v));
  return out;
}

CrossTermHamiltonian cross_term_hamiltonian(const FeedbackNetwork& net) {
  const CMatrix k11 = net.k11();
  const CMatrix k12 = net.k12();
  const CMatrix k21 = net.k21();
  const CMatrix k22 = net.k22();
  const CMatrix& sb = net.S_b;
  CrossTermHamiltonian out;
  out.Omega_minus =
      net.plant.Omega_minus -
      kI * (k11.adjoint() * sb * k21 - k21.adjoint() * sb.adjoint() * k11);
  out.Omega_plus =
      net.plant.Omega_plus -
      kI * (k11.adjoint() * sb * k22 - k21.adjoint() * sb.adjoint() * k12);
  out.hermitian_residual =
      norm_inf(out.Omega_minus - out.Omega_minus.adjoint());
  out.symmetric_residual =
      norm_inf(out.Omega_plus - out.Omega_plus.transpose());
  return out;
}

ReductionCheck verify_reduction(const FeedbackNetwork& net, double tol,
                                FrequencyGrid grid) {
  const Index m = net.plant.channels;
  const Index m1 = net.m1;
  std::vector<Index> ext, loop;
  for (Index j = 0; j < m1; ++j) ext.push_back(j);
  for (Index j = 0; j < m1; ++j) ext.push_back(m + j);
  for (Index j = m1; j < m; ++j) loop.push_back(j);
  for (Index j = m1; j < m; ++j) loop.push_back(m + j);

  const QuadRealization full = quad_realization(net.plant);
  const QuadRealization reduced = quad_realization(reduce_network(net));
  const CMatrix sb = passive_quadrature(net.S_b).cast<cdouble>();
  const Index k = sb.rows();

  ReductionCheck out;
  out.tol = tol;
  out.omegas = grid.omegas();
  for (double w : out.omegas) {
    const cdouble s(0.0, w);
    const CMatrix g = eval_tf(full, s);
    const CMatrix g11 = channel_block(g, ext, ext);
    const CMatrix g12 = channel_block(g, ext, loop);
    const CMatrix g21 = channel_block(g, loop, ext);
    const CMatrix g22 = channel_block(g, loop, loop);
    const Eigen::PartialPivLU<CMatrix> lu(CMatrix::Identity(k, k) - g22 * sb);
    const CMatrix closed = g11 + g12 * sb * lu.solve(g21);
    const CMatrix red = eval_tf(reduced, s);
    const double dev =
        norm_inf(closed - red) / std::max({norm_inf(closed), 1.0});
    out.max_deviation = std::max(out.max_deviation, dev);
  }
  out.passed = out.max_deviation <= tol;
  return out;
}

double design_objective(const FeedbackNetwork& net) {
  const RawReduction r = reduce_raw(net);
  CMatrix c(r.C_minus.rows(), 2 * r.C_minus.cols());
  c << r.C_minus, r.C_plus;
  return r.Omega_minus.real().squaredNorm() +
         r.Omega_plus.real().squaredNorm() +
         std::min(c.imag().squaredNorm(), c.real().squaredNorm());
}

std::vector<CMatrix> default_beamsplitters(Index m2) {
  const CMatrix id = CMatrix::Identity(m2, m2);
  return {id, kI * id, -kI * id};
}

DesignResult design_couplings(const CMatrix& Omega_minus,
                              const CMatrix& Omega_plus, Index m1, Index m2,
                              const std::vector<CMatrix>& S_b_candidates,
                              const SearchConfig& cfg) {
  const std::vector<Violation> v =
      validate(QuantumLinearSystem{Omega_minus.rows(), 1,
                                   CMatrix::Identity(1, 1),
                                   CMatrix::Zero(1, Omega_minus.rows()),
                                   CMatrix::Zero(1, Omega_minus.rows()),
                                   Omega_minus, Omega_plus});
  if (!v.empty()) throw ValidationError(v);
  if (m1 < 1 || m2 < 1) {
    throw PreconditionError("design_couplings: both channel groups must be "
                            "non-empty");
  }

  DesignResult result;
  for (size_t idx = 0; idx < S_b_candidates.size(); ++idx) {
    const CMatrix& s_b = S_b_candidates[idx];
    const CouplingSearch search(Omega_minus, Omega_plus, m1, m2, s_b, cfg);
    const FeedbackNetwork probe =
        search.decode(Eigen::VectorXd::Zero(search.dimension()));
    if (!(loop_condition(probe) <= kMaxResolventCondition)) {
      result.diagnostic += "beamsplitter #" + std::to_string(idx) +
                           " skipped: ill-posed loop; ";
      continue;
    }

    const int starts = std::max(cfg.starts, 1);
    std::vector<CouplingSearch::Outcome> outcomes(starts);
    const int threads = std::clamp(cfg.threads, 1, starts);
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (int i = t; i < starts; i += threads) outcomes[i] = search.run(i);
      });
    }
    for (auto& th : pool) th.join();

    const auto best = std::min_element(
        outcomes.begin(), outcomes.end(),
        [](const auto& a, const auto& b) { return a.objective < b.objective; });
    for (const auto& o : outcomes) {
      result.best_start_objective =
          std::min(result.best_start_objective, o.start_objective);
    }
    result.best_objective = std::min(result.best_objective, best->objective);
    if (!(best->objective < cfg.threshold)) continue;

    const FeedbackNetwork net = search.decode(best->x);
    DesignCandidate cand;
    cand.S_b = s_b;
    cand.k11 = net.k11();
    cand.k12 = net.k12();
    cand.k21 = net.k21();
    cand.k22 = net.k22();
    cand.objective = best->objective;
    try {
      cand.reduced = reduce_network(net);
    } catch (const StructureError& e) {
      result.diagnostic += std::string("rejected: ") + e.what() + "; ";
      continue;
    }
    cand.bae = certify_bae(cand.reduced);
    const bool bilateral =
        std::any_of(cand.bae.matched_conditions.begin(),
                    cand.bae.matched_conditions.end(),
                    [](const MatchedCondition& mc) { return is_bilateral(mc.id); });
    if (!bilateral || !cand.bae.consistency) {
      result.diagnostic += "rejected: reduced system matches no bilateral "
                           "condition; ";
      continue;
    }
    result.candidates.push_back(std::move(cand));
  }
  if (result.candidates.empty()) {
    result.diagnostic += "no candidate below threshold " +
                         std::to_string(cfg.threshold) + "; best J = " +
                         std::to_string(result.best_objective);
  }
  return result;
}

}  // namespace linqs
