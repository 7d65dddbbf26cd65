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
#include <random>
#include <string>
#include <vector>

#include "linqs/qsys.hpp"

namespace linqs {

/// Hard cap on the truncated Hilbert-space dimension.
inline constexpr Index kMaxFockSpaceDim = 4096;

/// The system's operators on the truncated space (fock_dim levels per mode,
/// mode 0 most significant in the basis index).
struct TruncatedOperators {
  Index fock_dim = 0;
  Index modes = 0;
  std::vector<CMatrix> a_ops;  // one per mode
  CMatrix H;
  std::vector<CMatrix> L_ops;  // one per channel

  Index dim() const { return H.rows(); }
};

/// L_j = sum_k (C-)_jk a_k + (C+)_jk a_k^dag, H = 1/2 breve(a)^dag Omega
/// breve(a), Hermitized. Throws ResourceError above kMaxFockSpaceDim.
TruncatedOperators build_truncated_operators(const QuantumLinearSystem& sys,
                                             Index fock_dim);

struct SpectralCluster {
  double eigenvalue;
  CMatrix projector;
};

/// Eigenvalues of a Hermitian matrix grouped within tol * max(1, ||L||),
/// with orthogonal projectors. Throws PreconditionError if L is not
/// Hermitian within tol.
std::vector<SpectralCluster> spectral_projections(const CMatrix& L,
                                                  double tol = 1e-9);

/// Diagonal density matrix with the given Fock-basis populations
/// (normalized; remaining levels empty).
CMatrix diagonal_state(const std::vector<double>& populations, Index dim);

/// Projector onto basis states with any mode in its top `levels` levels.
CMatrix truncation_edge_projector(Index fock_dim, Index modes,
                                  Index levels = 2);

/// Per-trajectory innovation source: an mt19937_64 stream seeded from
/// (seed, trajectory index), so results do not depend on thread layout.
class InnovationStream {
 public:
  InnovationStream(std::uint64_t seed, std::uint64_t trajectory, double dt);
  /// One vector of m independent N(0, dt) increments.
  Eigen::VectorXd next(Index m);

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
  double sqrt_dt_;
};

/// One Euler-Maruyama step of the conditioned master equation
///   d rho = -i[H, rho] dt + sum_j D[L_j] rho dt
///           + sum_j (L_j rho + rho L_j^dag - Tr(rho (L_j + L_j^dag)) rho) dnu_j
/// without positivity repair.
CMatrix sme_step(const TruncatedOperators& ops, const CMatrix& rho, double dt,
                 const Eigen::VectorXd& dnu);

/// Positivity-preserving Euler step of the same equation:
///   rho -> M rho M^dag / Tr(M rho M^dag),
///   M = I - (iH + 1/2 sum_j L_j^dag L_j) dt + sum_j L_j dy_j,
///   dy_j = dnu_j + Tr(rho (L_j + L_j^dag)) dt.
/// Agrees with sme_step in mean to o(dt) and is completely positive.
CMatrix kraus_step(const TruncatedOperators& ops, const CMatrix& rho,
                   double dt, const Eigen::VectorXd& dnu);

enum class StepScheme { kraus, euler_maruyama };

struct TrackedObservable {
  std::string name;
  CMatrix op;
};

struct SimulationConfig {
  double dt = 1e-3;
  double T = 1.0;
  int n_traj = 100;
  std::uint64_t seed = 1;
  int checkpoints = 10;  // recorded after t = 0
  int threads = 1;
  StepScheme scheme = StepScheme::kraus;
  double psd_tolerance = 1e-8;
  double repair_budget = 1e-4;  // per-trajectory clipped eigenvalue mass
};

struct SMETrajectoryBatch {
  std::vector<double> times;
  std::vector<std::string> names;
  /// values[obs](trajectory, checkpoint) = Tr(rho_c X).
  std::vector<RMatrix> values;
  std::vector<double> op_norms;     // ||X|| per observable
  std::vector<double> repair_mass;  // per trajectory
  double max_trace_defect = 0.0;    // before renormalization
  double max_edge_population = 0.0;
  std::uint64_t seed = 0;
  double dt = 0.0;
  std::vector<std::string> warnings;
};

/// Throws InstabilityError when a trajectory's positivity repair exceeds the
/// budget, PreconditionError for an invalid initial state.
SMETrajectoryBatch simulate_qsme(const TruncatedOperators& ops,
                                 const CMatrix& rho0,
                                 const std::vector<TrackedObservable>& tracked,
                                 const SimulationConfig& cfg);

struct MartingaleSeries {
  std::string name;
  std::vector<double> mean;
  std::vector<double> se;
  double drift = 0.0;     // mean(T) - mean(0)
  double drift_se = 0.0;  // standard error of the per-trajectory change
  double allowance = 0.0;  // mean repair mass times ||X||
  double max_checkpoint_z = 0.0;
  bool pass = false;  // |drift| <= 3 (drift_se + allowance)
};

struct MartingaleReport {
  std::vector<MartingaleSeries> series;
  bool all_pass = false;
};

MartingaleReport martingale_stats(const SMETrajectoryBatch& batch);

}  // namespace linqs
