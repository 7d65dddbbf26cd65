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

#include "linqs/sme.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace linqs {
namespace {

const cdouble kI(0.0, 1.0);

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix ladder(Index f) {
  CMatrix a = CMatrix::Zero(f, f);
  for (Index k = 1; k < f; ++k) a(k - 1, k) = std::sqrt(double(k));
  return a;
}

double expectation(const CMatrix& rho, const CMatrix& x) {
  // Tr(rho X) for Hermitian rho and X.
  return (rho.transpose().cwiseProduct(x)).sum().real();
}


}  // namespace

TruncatedOperators build_truncated_operators(const QuantumLinearSystem& sys,
                                             Index fock_dim) {
  if (fock_dim < 2) {
    throw PreconditionError("build_truncated_operators: fock_dim must be >= 2");
  }
  const Index n = sys.modes;
  double dim = 1.0;
  for (Index k = 0; k < n; ++k) dim *= double(fock_dim);
  if (dim > double(kMaxFockSpaceDim)) {
    throw ResourceError("truncated dimension " + std::to_string(dim) +
                        " exceeds the cap of " +
                        std::to_string(kMaxFockSpaceDim));
  }
  const Index d = static_cast<Index>(dim);

  TruncatedOperators ops;
  ops.fock_dim = fock_dim;
  ops.modes = n;
  const CMatrix a1 = ladder(fock_dim);
  const CMatrix id1 = CMatrix::Identity(fock_dim, fock_dim);
  for (Index k = 0; k < n; ++k) {
    CMatrix op = CMatrix::Identity(1, 1);
    for (Index j = 0; j < n; ++j) op = kron(op, j == k ? a1 : id1);
    ops.a_ops.push_back(op);
  }

  // breve(a) = (a_1 .. a_n, a_1^dag .. a_n^dag)
  std::vector<CMatrix> breve(2 * n);
  for (Index k = 0; k < n; ++k) {
    breve[k] = ops.a_ops[k];
    breve[n + k] = ops.a_ops[k].adjoint();
  }
  const CMatrix omega = sys.hamiltonian();
  CMatrix h = CMatrix::Zero(d, d);
  for (Index i = 0; i < 2 * n; ++i) {
    for (Index j = 0; j < 2 * n; ++j) {
      if (omega(i, j) != 0.0) h += omega(i, j) * breve[i].adjoint() * breve[j];
    }
  }
  h *= 0.5;
  ops.H = 0.5 * (h + h.adjoint());

  for (Index r = 0; r < sys.channels; ++r) {
    CMatrix l = CMatrix::Zero(d, d);
    for (Index k = 0; k < n; ++k) {
      l += sys.C_minus(r, k) * breve[k] + sys.C_plus(r, k) * breve[n + k];
    }
    ops.L_ops.push_back(l);
  }
  return ops;
}

std::vector<SpectralCluster> spectral_projections(const CMatrix& L,
                                                  double tol) {
  const double scale = std::max(1.0, norm_inf(L));
  const double skew = norm_inf(L - L.adjoint());
  if (skew > tol * scale) {
    throw PreconditionError("spectral_projections: operator is not Hermitian "
                            "(residual " + std::to_string(skew) + ")");
  }
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (L + L.adjoint()));
  const auto& vals = es.eigenvalues();
  const CMatrix& vecs = es.eigenvectors();
  std::vector<SpectralCluster> out;
  Index start = 0;
  while (start < vals.size()) {
    Index end = start + 1;
    while (end < vals.size() && vals(end) - vals(end - 1) <= tol * scale) {
      ++end;
    }
    const CMatrix v = vecs.middleCols(start, end - start);
    out.push_back({vals.segment(start, end - start).mean(), v * v.adjoint()});
    start = end;
  }
  return out;
}

CMatrix diagonal_state(const std::vector<double>& populations, Index dim) {
  if (static_cast<Index>(populations.size()) > dim) {
    throw DimensionError("diagonal_state: more populations than levels");
  }
  double total = 0.0;
  for (double p : populations) {
    if (!(p >= 0.0)) throw PreconditionError("populations must be >= 0");
    total += p;
  }
  if (!(total > 0.0)) throw PreconditionError("populations sum to zero");
  CMatrix rho = CMatrix::Zero(dim, dim);
  for (size_t k = 0; k < populations.size(); ++k) {
    rho(k, k) = populations[k] / total;
  }
  return rho;
}

CMatrix truncation_edge_projector(Index fock_dim, Index modes, Index levels) {
  Index d = 1;
  for (Index k = 0; k < modes; ++k) d *= fock_dim;
  CMatrix p = CMatrix::Zero(d, d);
  for (Index idx = 0; idx < d; ++idx) {
    Index rest = idx;
    bool edge = false;
    for (Index k = 0; k < modes; ++k) {
      if (rest % fock_dim >= fock_dim - levels) edge = true;
      rest /= fock_dim;
    }
    if (edge) p(idx, idx) = 1.0;
  }
  return p;
}

InnovationStream::InnovationStream(std::uint64_t seed,
                                   std::uint64_t trajectory, double dt)
    : rng_(splitmix64(seed ^ splitmix64(trajectory + 1))),
      sqrt_dt_(std::sqrt(dt)) {}

Eigen::VectorXd InnovationStream::next(Index m) {
  Eigen::VectorXd out(m);
  for (Index j = 0; j < m; ++j) out(j) = sqrt_dt_ * normal_(rng_);
  return out;
}

CMatrix sme_step(const TruncatedOperators& ops, const CMatrix& rho, double dt,
                 const Eigen::VectorXd& dnu) {
  CMatrix drho = -kI * (ops.H * rho - rho * ops.H) * dt;
  for (size_t j = 0; j < ops.L_ops.size(); ++j) {
    const CMatrix& l = ops.L_ops[j];
    const CMatrix l_rho = l * rho;
    const CMatrix rho_ldag = rho * l.adjoint();
    const CMatrix ldag_l = l.adjoint() * l;
    drho += (l * rho_ldag - 0.5 * (ldag_l * rho + rho * ldag_l)) * dt;
    const cdouble mean = (l_rho + rho_ldag).trace();
    drho += (l_rho + rho_ldag - mean * rho) * dnu(j);
  }
  return rho + drho;
}

CMatrix kraus_step(const TruncatedOperators& ops, const CMatrix& rho,
                   double dt, const Eigen::VectorXd& dnu) {
  const Index d = ops.dim();
  CMatrix m = CMatrix::Identity(d, d) - kI * ops.H * dt;
  for (size_t j = 0; j < ops.L_ops.size(); ++j) {
    const CMatrix& l = ops.L_ops[j];
    const double mean = 2.0 * (l * rho).trace().real();
    m += -0.5 * (l.adjoint() * l) * dt + l * (dnu(j) + mean * dt);
  }
  CMatrix next = m * rho * m.adjoint();
  return next / next.trace().real();
}

namespace {

struct TrajectoryResult {
  RMatrix values;  // observables x checkpoints
  double repair = 0.0;
  double trace_defect = 0.0;
  double edge = 0.0;
};

}  // namespace

SMETrajectoryBatch simulate_qsme(const TruncatedOperators& ops,
                                 const CMatrix& rho0,
                                 const std::vector<TrackedObservable>& tracked,
                                 const SimulationConfig& cfg) {
  const Index d = ops.dim();
  if (rho0.rows() != d || rho0.cols() != d) {
    throw DimensionError("simulate_qsme: rho0 must be " + std::to_string(d) +
                         "x" + std::to_string(d));
  }
  if (std::abs(rho0.trace() - 1.0) > 1e-8 ||
      norm_inf(rho0 - rho0.adjoint()) > 1e-12 ||
      Eigen::SelfAdjointEigenSolver<CMatrix>(rho0).eigenvalues().minCoeff() <
          -cfg.psd_tolerance) {
    throw PreconditionError("simulate_qsme: rho0 must be a density matrix");
  }
  if (!(cfg.dt > 0.0) || !(cfg.T > 0.0) || cfg.n_traj < 1 ||
      cfg.checkpoints < 1) {
    throw PreconditionError("simulate_qsme: dt, T, n_traj and checkpoints "
                            "must be positive");
  }
  for (const auto& x : tracked) {
    if (x.op.rows() != d || x.op.cols() != d) {
      throw DimensionError("tracked observable " + x.name + " has wrong size");
    }
  }

  const long steps = std::lround(cfg.T / cfg.dt);
  const int checkpoints = static_cast<int>(std::min<long>(cfg.checkpoints,
                                                          steps));
  std::vector<long> record_at;
  for (int c = 0; c <= checkpoints; ++c) {
    record_at.push_back(steps * c / checkpoints);
  }

  SMETrajectoryBatch batch;
  batch.seed = cfg.seed;
  batch.dt = cfg.dt;
  for (long s : record_at) batch.times.push_back(double(s) * cfg.dt);
  for (const auto& x : tracked) {
    batch.names.push_back(x.name);
    batch.op_norms.push_back(norm_inf(x.op));
  }

  double generator = norm_inf(ops.H);
  for (const auto& l : ops.L_ops) generator += norm_inf(l.adjoint() * l);
  if (cfg.dt * generator > 0.1) {
    batch.warnings.push_back("dt * ||generator|| = " +
                             std::to_string(cfg.dt * generator) +
                             " exceeds 0.1; consider a smaller dt");
  }

  const CMatrix edge = truncation_edge_projector(ops.fock_dim, ops.modes);
  const Index m = static_cast<Index>(ops.L_ops.size());
  const Index nobs = static_cast<Index>(tracked.size());
  const CMatrix id = CMatrix::Identity(d, d);

  auto run = [&](int index) {
    TrajectoryResult res;
    res.values = RMatrix::Zero(nobs, record_at.size());
    InnovationStream noise(cfg.seed, static_cast<std::uint64_t>(index),
                           cfg.dt);
    CMatrix rho = rho0;
    size_t next = 0;
    auto record = [&] {
      for (Index o = 0; o < nobs; ++o) {
        res.values(o, next) = expectation(rho, tracked[o].op);
      }
      res.edge = std::max(res.edge, expectation(rho, edge));
      ++next;
    };
    record();
    for (long s = 1; s <= steps; ++s) {
      rho = cfg.scheme == StepScheme::kraus
                ? kraus_step(ops, rho, cfg.dt, noise.next(m))
                : sme_step(ops, rho, cfg.dt, noise.next(m));
      rho = 0.5 * (rho + rho.adjoint()).eval();
      res.trace_defect =
          std::max(res.trace_defect, std::abs(rho.trace().real() - 1.0));
      if (Eigen::LLT<CMatrix>(rho + cfg.psd_tolerance * id).info() !=
          Eigen::Success) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
        Eigen::VectorXd vals = es.eigenvalues();
        for (Index k = 0; k < vals.size(); ++k) {
          if (vals(k) < 0.0) {
            res.repair += -vals(k);
            vals(k) = 0.0;
          }
        }
        rho = es.eigenvectors() * vals.cast<cdouble>().asDiagonal() *
              es.eigenvectors().adjoint();
        if (res.repair > cfg.repair_budget) {
          throw InstabilityError(
              "trajectory " + std::to_string(index) +
              " needed positivity repair of mass " +
              std::to_string(res.repair) + "; use a smaller dt");
        }
      }
      rho /= rho.trace().real();
      if (next < record_at.size() && s == record_at[next]) record();
    }
    return res;
  };

  std::vector<TrajectoryResult> results(cfg.n_traj);
  const int threads = std::clamp(cfg.threads, 1, cfg.n_traj);
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < cfg.n_traj; i += threads) results[i] = run(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  batch.values.assign(nobs, RMatrix(cfg.n_traj, record_at.size()));
  for (int i = 0; i < cfg.n_traj; ++i) {
    for (Index o = 0; o < nobs; ++o) {
      batch.values[o].row(i) = results[i].values.row(o);
    }
    batch.repair_mass.push_back(results[i].repair);
    batch.max_trace_defect =
        std::max(batch.max_trace_defect, results[i].trace_defect);
    batch.max_edge_population =
        std::max(batch.max_edge_population, results[i].edge);
  }
  return batch;
}

MartingaleReport martingale_stats(const SMETrajectoryBatch& batch) {
  MartingaleReport rep;
  rep.all_pass = true;
  double repair = 0.0;
  for (double r : batch.repair_mass) repair += r;
  if (!batch.repair_mass.empty()) repair /= double(batch.repair_mass.size());

  for (size_t o = 0; o < batch.values.size(); ++o) {
    const RMatrix& v = batch.values[o];
    const double n = double(v.rows());
    MartingaleSeries s;
    s.name = batch.names[o];
    s.allowance = repair * std::max(batch.op_norms[o], 1.0);
    auto stderr_of = [&](const Eigen::VectorXd& x) {
      if (x.size() < 2) return 0.0;
      const double var = (x.array() - x.mean()).square().sum() / (n - 1.0);
      return std::sqrt(var / n);
    };
    for (Index c = 0; c < v.cols(); ++c) {
      s.mean.push_back(v.col(c).mean());
      s.se.push_back(stderr_of(v.col(c)));
      const Eigen::VectorXd change = v.col(c) - v.col(0);
      const double se = stderr_of(change);
      const double gap = std::abs(change.mean());
      if (se > 0.0) s.max_checkpoint_z = std::max(s.max_checkpoint_z, gap / se);
    }
    const Eigen::VectorXd change = v.col(v.cols() - 1) - v.col(0);
    s.drift = change.mean();
    s.drift_se = stderr_of(change);
    s.pass = std::abs(s.drift) <= 3.0 * (s.drift_se + s.allowance);
    rep.all_pass = rep.all_pass && s.pass;
    rep.series.push_back(std::move(s));
  }
  return rep;
}

}  // namespace linqs
