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

// Acceptance checks: prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "linqs/bae.hpp"
#include "linqs/feedback.hpp"
#include "linqs/kalman.hpp"
#include "linqs/qnd.hpp"
#include "linqs/sme.hpp"
#include "support/oracles.hpp"
#include "support/random_systems.hpp"

using namespace linqs;
using namespace linqs::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel_dev(const CMatrix& x, const CMatrix& ref) {
  return norm_inf(x - ref) / std::max(norm_inf(ref), 1.0);
}

bool has_pair(const BAEReport& r, QuadraturePair p) {
  return std::find(r.certified_pairs.begin(), r.certified_pairs.end(), p) !=
         r.certified_pairs.end();
}

const QuadraturePair kQP{Quadrature::q, Quadrature::p};
const QuadraturePair kPQ{Quadrature::p, Quadrature::q};
const QuadraturePair kQQ{Quadrature::q, Quadrature::q};
const QuadraturePair kPP{Quadrature::p, Quadrature::p};

// --- 1 ----------------------------------------------------------------------

Outcome michelson() {
  const double mass = 1, omega_m = 1, lambda = 1;
  CMatrix c(2, 2);
  c << kI, kI, kI, -kI;
  c *= std::sqrt(lambda) / 2;
  const CMatrix id = CMatrix::Identity(2, 2);
  const auto sys = make_system(id, c, c,
                               0.5 * (mass * omega_m * omega_m + 1 / mass) * id,
                               0.5 * (mass * omega_m * omega_m - 1 / mass) * id);
  const QuadRealization r = quad_realization(sys);
  const double scale = std::max({norm_inf(r.A), norm_inf(r.B), norm_inf(r.C),
                                 norm_inf(r.D), 1.0});
  double freq = 0, markov = 0;
  for (double w : FrequencyGrid{1e-3, 1e3, 32}.omegas()) {
    freq = std::max(freq, norm_inf(eval_tf(r, cdouble(0, w)).topRightCorner(2, 2)));
  }
  for (const RMatrix& p : markov_params(r, 9)) {
    markov = std::max(markov, norm_inf(p.topRightCorner(2, 2)));
  }
  const BAEReport rep = certify_bae(sys, 1e-10);
  const bool matched = std::any_of(
      rep.matched_conditions.begin(), rep.matched_conditions.end(),
      [](const MatchedCondition& m) { return m.id == "q_coupling_imaginary"; });
  return {freq <= 1e-10 * scale && markov <= 1e-10 * scale && matched &&
              has_pair(rep, kQP) && rep.consistency,
          fmt("qp block max %.2e (32 freqs), %.2e (Markov k<=8), scale %.2f, "
              "matched q_coupling_imaginary=%d",
              freq, markov, scale, int(matched))};
}

// --- 2 ----------------------------------------------------------------------

Outcome closed_forms() {
  Rng rng(1002);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const Index n = 1 + t % 3;
    const Index m = 1 + (t / 3) % 3;
    const auto sys = bilateral_system(rng, n, m, Reality::real, Reality::real);
    const QuadRealization r = quad_realization(sys);
    for (cdouble s : {cdouble(0, 0.1), cdouble(0, 1.7), cdouble(0.5, 3.0),
                      cdouble(0, 25.0)}) {
      const DiagonalTransfer d = closed_form_diag_tf(sys, s);
      const CMatrix g = eval_tf(r, s);
      worst = std::max({worst, rel_dev(d.g_q, g.topLeftCorner(m, m)),
                        rel_dev(d.g_p, g.bottomRightCorner(m, m))});
    }
  }
  return {worst <= 1e-10,
          fmt("100 systems x 4 points, max relative deviation %.2e", worst)};
}

// --- 3 ----------------------------------------------------------------------

Outcome bilateral_and_unilateral() {
  Rng rng(1003);
  int failures = 0, total = 0;
  for (Reality s : {Reality::real, Reality::imaginary}) {
    for (Reality c : {Reality::real, Reality::imaginary}) {
      for (int t = 0; t < 50; ++t) {
        const auto sys = bilateral_system(rng, 1 + t % 3, 1 + (t / 3) % 3, s, c);
        const BAEReport r = certify_bae(sys, 1e-10);
        const bool ok = s == Reality::real
                            ? has_pair(r, kQP) && has_pair(r, kPQ)
                            : has_pair(r, kQQ) && has_pair(r, kPP);
        failures += !(ok && r.consistency);
        ++total;
      }
    }
  }
  struct Case {
    double sign;
    Reality s, c;
    QuadraturePair pair;
  };
  const Case cases[] = {
      {1, Reality::real, Reality::real, kQP},
      {1, Reality::real, Reality::imaginary, kPQ},
      {1, Reality::imaginary, Reality::real, kQQ},
      {1, Reality::imaginary, Reality::imaginary, kPP},
      {-1, Reality::real, Reality::real, kPQ},
      {-1, Reality::real, Reality::imaginary, kQP},
      {-1, Reality::imaginary, Reality::real, kPP},
      {-1, Reality::imaginary, Reality::imaginary, kQQ},
  };
  int uni_fail = 0, uni_total = 0;
  for (const auto& cs : cases) {
    for (int t = 0; t < 50; ++t) {
      const auto sys =
          unilateral_system(rng, 1 + t % 3, 1 + (t / 3) % 3, cs.sign, cs.s, cs.c);
      const BAEReport r = certify_bae(sys, 1e-10);
      uni_fail += !(has_pair(r, cs.pair) && r.consistency);
      ++uni_total;
    }
  }
  return {failures == 0 && uni_fail == 0,
          fmt("bilateral %d/%d certified, unilateral %d/%d certified",
              total - failures, total, uni_total - uni_fail, uni_total)};
}

// --- 4 ----------------------------------------------------------------------

Outcome qnd_equivalence() {
  Rng rng(1004);
  const double tol = 1e-10;
  int disagreements = 0, holds = 0;
  for (int t = 0; t < 500; ++t) {
    const Index n = 1 + t % 3;
    const Index m = 1 + (t / 3) % 3;
    QuantumLinearSystem sys;
    if (t % 2 == 0) {
      sys = qnd_system(rng, std::max<Index>(n, 2), m, 1);
    } else {
      sys = random_system(rng, n, m);
      if (t % 5 == 1) sys.C_minus *= 1e-3;  // small but nonzero couplings
    }
    const CMatrix omega = sys.hamiltonian();
    const CMatrix c = sys.coupling();
    const double scale = std::max(norm_inf(c) * norm_inf(omega), 1.0);
    const double coeff = commutator_coeffs(sys).norm();
    CMatrix eq(sys.channels, 2 * sys.modes);
    eq << sys.C_minus * sys.Omega_minus - sys.C_plus * sys.Omega_plus.adjoint(),
        sys.C_minus * sys.Omega_plus - sys.C_plus * sys.Omega_minus.transpose();
    const CMatrix cm0 = delta(sys.C_minus, CMatrix::Zero(sys.channels, sys.modes));
    const double doubled = norm_inf(c * omega - 2.0 * cm0 * omega);
    const bool a = coeff <= tol * scale;
    const bool b = norm_inf(eq) <= tol * scale;
    const bool d = doubled <= tol * scale;
    bool library = false;
    try {
      library = qnd_interaction(sys, tol).holds;
    } catch (const ConsistencyError&) {
      ++disagreements;
      continue;
    }
    if (!(a == b && b == d && d == library)) ++disagreements;
    if (t % 2 == 0 && !a) ++disagreements;  // construction must hold
    holds += a;
  }
  return {disagreements == 0,
          fmt("500 systems (%d with [L,H]=0), %d disagreements", holds,
              disagreements)};
}

// --- 5 ----------------------------------------------------------------------

Outcome siso() {
  Rng rng(1005);
  double worst_q = 0, worst_p = 0;
  int flagged = 0;
  const auto grid = FrequencyGrid{1e-2, 1e2, 32}.omegas();
  for (SisoBranch b : {SisoBranch::q, SisoBranch::p}) {
    for (int t = 0; t < 100; ++t) {
      const auto sys = siso_system(rng, 1 + t % 3, b);
      const SisoAnalysis a = siso_analysis(sys);
      const double g = sys.C_minus.squaredNorm() - sys.C_plus.squaredNorm();
      flagged += b == SisoBranch::q ? a.q_commutes : a.p_commutes;
      const QuadRealization r = quad_realization(sys);
      for (double w : grid) {
        const cdouble s(0, w);
        const CMatrix gq = eval_tf(r, s);
        const cdouble expect = (s - g / 2) / (s + g / 2);
        const double dev =
            std::abs((b == SisoBranch::q ? gq(0, 0) : gq(1, 1)) - expect);
        (b == SisoBranch::q ? worst_q : worst_p) =
            std::max(b == SisoBranch::q ? worst_q : worst_p, dev);
      }
    }
  }
  return {worst_q <= 1e-10 && worst_p <= 1e-10 && flagged == 200,
          fmt("q branch max %.2e, p branch max %.2e over 100x32 each; "
              "commutation flagged %d/200",
              worst_q, worst_p, flagged)};
}

// --- 6 ----------------------------------------------------------------------

Outcome special_cases() {
  Rng rng(1006);
  const std::pair<Special, SpecialCase> cases[] = {
      {Special::c_plus_zero, SpecialCase::c_plus_zero},
      {Special::c_minus_zero, SpecialCase::c_minus_zero},
      {Special::omega_plus_zero, SpecialCase::omega_plus_zero},
      {Special::omega_minus_zero, SpecialCase::omega_minus_zero}};
  double worst_tf = 0, worst_extra = 0;
  for (const auto& [make, which] : cases) {
    for (int t = 0; t < 50; ++t) {
      const Index n = 1 + t % 3;
      const Index m = 1 + (t / 3) % 3;
      const auto sys = special_system(rng, n, m, make);
      const AcRealization r = ac_realization(sys);
      for (cdouble s : {cdouble(0, 0.3), cdouble(0.2, 2.0), cdouble(0, 11.0)}) {
        worst_tf = std::max(worst_tf,
                            rel_dev(special_case_tf(sys, which, s), eval_tf(r, s)));
      }
      if (make == Special::c_plus_zero || make == Special::c_minus_zero) {
        const CMatrix c = sys.coupling();
        const CMatrix omega = sys.hamiltonian();
        const double scale = std::max(norm_inf(c) * norm_inf(omega), 1.0);
        const CMatrix c_j_omega = c * flat_metric(n).cast<cdouble>() * omega;
        worst_extra = std::max(worst_extra, norm_inf(c_j_omega) / scale);
        const cdouble s(0.1, 1.3);
        const CMatrix lhs = sigma_tf(sys, s) * 2.0 * s;
        const CMatrix rhs = c * flat_adjoint(c);
        worst_extra = std::max(worst_extra, rel_dev(lhs, rhs));
      }
    }
  }
  return {worst_tf <= 1e-10 && worst_extra <= 1e-10,
          fmt("4 cases x 50: closed form max rel. deviation %.2e; "
              "C J Omega and 2s Sigma identities max %.2e",
              worst_tf, worst_extra)};
}

// --- 7 ----------------------------------------------------------------------

Outcome feedback() {
  Rng rng(1007);
  int built = 0, attempts = 0, oracle_fail = 0;
  double worst = 0;
  while (built < 100 && attempts < 1000) {
    ++attempts;
    const Index n = 1 + attempts % 3;
    const Index m1 = 1 + attempts % 2;
    const Index m2 = 1 + (attempts / 2) % 2;
    const FeedbackNetwork net = make_network(
        hermitian(rng, n), complex_symmetric(rng, n), ginibre(rng, m1, n),
        ginibre(rng, m1, n), ginibre(rng, m2, n), ginibre(rng, m2, n),
        unitary(rng, m2), unitary(rng, m1 + m2));
    if (loop_condition(net) > 1e6) continue;
    ++built;
    const QuantumLinearSystem red = reduce_network(net);
    const AcRealization r = ac_realization(red);
    for (double w : FrequencyGrid{1e-2, 1e2, 8}.omegas()) {
      const cdouble s(0, w);
      worst = std::max(worst, rel_dev(eval_tf(r, s), closed_loop_ac(net, s)));
    }
    oracle_fail += !verify_reduction(net, 1e-9).passed;
  }

  // Reference network, S_G = I and S_b = -i.
  CMatrix om(2, 2), op(2, 2), k11(1, 2), k12(1, 2), k21(1, 2), k22(1, 2);
  om << 2, cdouble(3, 2), cdouble(3, -2), 4;
  op << 2, cdouble(3, -1), cdouble(3, -1), 5;
  k11 << 1, cdouble(1, 1);
  k12 << 1, cdouble(2, -1);
  k21 << cdouble(1, 1), cdouble(1, 1);
  k22 << cdouble(1, 1), cdouble(2, 2);
  const FeedbackNetwork ex = make_network(om, op, k11, k12, k21, k22,
                                          CMatrix::Constant(1, 1, -kI));
  const CrossTermHamiltonian p = cross_term_hamiltonian(ex);
  const double re = std::max(norm_inf(p.Omega_minus.real()),
                             norm_inf(p.Omega_plus.real()));
  const bool imaginary = re <= 1e-10;
  const bool example_oracle = verify_reduction(ex, 1e-9).passed;
  const std::string disposition =
      imaginary ? "cross-term Omega_bar purely imaginary"
                : "cross-term Omega_bar NOT imaginary (documented "
                  "expected-failure artifact)";
  return {built == 100 && worst <= 1e-9 && oracle_fail == 0 && example_oracle,
          fmt("%d networks, max rel. deviation %.2e, quadrature oracle "
              "failures %d; example: %s (max |Re| %.1e), example oracle %s",
              built, worst, oracle_fail, disposition.c_str(), re,
              example_oracle ? "agrees" : "DISAGREES")};
}

// --- 8 ----------------------------------------------------------------------

Outcome kalman() {
  KalmanCoSubsystem kappa;
  const double k = 0.7;
  kappa.C_co = std::sqrt(k) * RMatrix::Identity(2, 2);
  kappa.B_co = -std::sqrt(k) * RMatrix::Identity(2, 2);
  kappa.A_co = 0.5 * kappa.B_co * kappa.C_co;
  const KalmanBAE kv = check_kalman_bae(kappa);
  const bool kappa_ok = kv.qp_residual == 0.0 && kv.pq_residual == 0.0 &&
                        kv.q_wrt_p && kv.p_wrt_q;

  Rng rng(1008);
  int mismatches = 0;
  for (int t = 0; t < 200; ++t) {
    const Index m = 2 + t % 2;
    const Index r = m + (t / 2) % 2;
    const bool q_cond = t % 4 < 2;
    const bool p_cond = t % 2 == 0;
    const RMatrix rq = gaussian(rng, m, r), iq = gaussian(rng, m, r);
    const RMatrix rp = q_cond ? RMatrix(rq * real_symmetric(rng, r)) : gaussian(rng, m, r);
    const RMatrix ip = p_cond ? RMatrix(iq * real_symmetric(rng, r)) : gaussian(rng, m, r);
    KalmanCoSubsystem sub = kalman_from_gamma(
        rq.cast<cdouble>() + kI * iq.cast<cdouble>(),
        rp.cast<cdouble>() + kI * ip.cast<cdouble>());
    // Drift satisfying C A = C B C / 2.
    const Index d = 2 * r;
    const RMatrix pinv =
        sub.C_co.completeOrthogonalDecomposition().pseudoInverse();
    const RMatrix half = 0.5 * sub.B_co * sub.C_co;
    const RMatrix g = gaussian(rng, d, d);
    const RMatrix null = (RMatrix::Identity(d, d) - pinv * sub.C_co) * g;
    // Null-space part sized like B C / 2 so powers of A stay well scaled;
    // dropped when C has full column rank.
    sub.A_co = half;
    if (norm_inf(null) > 1e-8 * norm_inf(g)) {
      sub.A_co += null * (norm_inf(half) / norm_inf(null));
    }
    const KalmanBAE v = check_kalman_bae(sub, 1e-10);
    double qp = 0, pq = 0;
    RMatrix akb = sub.B_co;
    // Rounding scale of C A^k B is ||C|| ||A||^k ||B||.
    double ref = norm_inf(sub.C_co) * norm_inf(sub.B_co);
    for (int j = 0; j < 2 * d; ++j) {
      const RMatrix mp = sub.C_co * akb;
      qp = std::max(qp, norm_inf(mp.topRightCorner(m, m)) / ref);
      pq = std::max(pq, norm_inf(mp.bottomLeftCorner(m, m)) / ref);
      akb = sub.A_co * akb;
      ref *= norm_inf(sub.A_co);
    }
    mismatches += v.q_wrt_p != (qp <= 1e-10);
    mismatches += v.p_wrt_q != (pq <= 1e-10);
    mismatches += v.q_wrt_p != q_cond;
    mismatches += v.p_wrt_q != p_cond;
  }
  return {kappa_ok && mismatches == 0,
          fmt("kappa products %.1e, %.1e; 200 instances, %d verdict/Markov "
              "mismatches",
              kv.qp_residual, kv.pq_residual, mismatches)};
}

// --- 9 ----------------------------------------------------------------------

Outcome martingale() {
  double edge = 0;
  auto run = [&](double omega_minus, double omega_plus, bool monitored) {
    const auto sys =
        assemble(CMatrix::Identity(1, 1), CMatrix::Ones(1, 1), CMatrix::Ones(1, 1),
                 CMatrix::Constant(1, 1, omega_minus),
                 CMatrix::Constant(1, 1, omega_plus));
    const TruncatedOperators ops = build_truncated_operators(sys, 8);
    const CMatrix& l = ops.L_ops[0];
    std::vector<TrackedObservable> tracked;
    int j = 0;
    for (const auto& c : spectral_projections(l)) {
      tracked.push_back({"P_" + std::to_string(++j), c.projector});
    }
    tracked.push_back({"L", l});
    tracked.push_back({"L2", l * l});
    SimulationConfig cfg;
    cfg.dt = 1e-3;
    cfg.T = 1.0;
    cfg.n_traj = 2000;
    cfg.seed = 20260101;
    std::vector<double> thermal;
    for (int k = 0; k < 8; ++k) thermal.push_back(std::exp(-double(k)));
    const SMETrajectoryBatch batch =
        simulate_qsme(ops, diagonal_state(thermal, 8), tracked, cfg);
    if (monitored) edge = std::max(edge, batch.max_edge_population);
    return martingale_stats(batch);
  };
  const MartingaleReport qnd = run(0.0, 0.0, true);
  // H = p^2: Omega- = 1, Omega+ = -1.
  const MartingaleReport control = run(1.0, -1.0, false);
  double worst_z = 0;
  for (const auto& s : qnd.series) {
    worst_z = std::max(worst_z, std::abs(s.drift) / std::max(s.drift_se, 1e-300));
  }
  double control_z = 0;
  std::string control_name;
  for (const auto& s : control.series) {
    const double z = std::abs(s.drift) / std::max(s.drift_se + s.allowance, 1e-300);
    if (z > control_z) {
      control_z = z;
      control_name = s.name;
    }
  }
  double control_l2 = 0;
  for (const auto& s : control.series) {
    if (s.name == "L2") control_l2 = std::abs(s.drift) / std::max(s.drift_se, 1e-300);
  }
  return {qnd.all_pass && !control.all_pass && control_z > 3,
          fmt("H=0: %zu series within 3 SE (max |drift|/SE %.2f); "
              "H=p^2 control: %s drifts %.1f SE, L2 drifts %.1f SE; "
              "H=0 max edge population %.4f",
              qnd.series.size(), worst_z, control_name.c_str(), control_z,
              control_l2, edge)};
}

// --- 10 ---------------------------------------------------------------------

Outcome qnd_variables() {
  Rng rng(1010);
  int mismatches = 0, qnd_true = 0, qnd_false = 0;
  for (int t = 0; t < 100; ++t) {
    const Index n = 1 + t % 3;
    const Index m = 1 + (t / 3) % 3;
    CMatrix cm = ginibre(rng, m, n);
    if (t % 4 == 0) cm = cm.real().cast<cdouble>();  // drop the imaginary part
    const CMatrix om = real_symmetric(rng, n).cast<cdouble>();
    const bool p_case = t % 2 == 1;
    const auto sys = p_case
                         ? assemble(unitary(rng, m), cm, -cm, om, -om)
                         : assemble(unitary(rng, m), cm, cm, om, om);
    const QNDVariableReport rep = qnd_variable_report(sys);
    const CMatrix a = 2.0 * om.imag().cast<cdouble>();
    const bool observable = pbh_observable(a, cm.imag().cast<cdouble>()) ||
                            pbh_observable(a, cm.real().cast<cdouble>());
    const QuadratureVerdict& hit = p_case ? rep.p : rep.q;
    const QuadratureVerdict& other = p_case ? rep.q : rep.p;
    const std::string want = p_case ? "p_coupling_opposite_hamiltonian"
                                    : "q_coupling_equal_hamiltonian";
    mismatches += rep.case_matched != want;
    mismatches += hit.is_qnd != observable;
    mismatches += other.is_qnd;
    (observable ? qnd_true : qnd_false)++;
  }
  int final_fail = 0;
  for (int t = 0; t < 20; ++t) {
    const Index n = 1 + t % 3;
    const CMatrix om = real_symmetric(rng, n).cast<cdouble>();
    const auto sys = assemble(CMatrix::Identity(2, 2),
                              gaussian(rng, 2, n).cast<cdouble>(),
                              CMatrix::Zero(2, n), om, om);
    const QNDVariableReport rep = qnd_variable_report(sys);
    final_fail += rep.case_matched != "bae_without_qnd" || rep.q.is_qnd ||
                  rep.p.is_qnd || !has_pair(certify_bae(sys), kQP);
  }
  return {mismatches == 0 && final_fail == 0 && qnd_true > 0 && qnd_false > 0,
          fmt("100 constructions (%d observable, %d not), %d mismatches; "
              "C+=0 real case: %d/20 report BAE without QND",
              qnd_true, qnd_false, mismatches, 20 - final_fail)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"Michelson qp block zero, matched coupling condition", michelson},
      {"diagonal closed forms vs state space", closed_forms},
      {"bilateral and unilateral condition suites", bilateral_and_unilateral},
      {"[L,H]=0 equivalence of three forms", qnd_equivalence},
      {"SISO closed form, q and p branches", siso},
      {"special-case closed forms", special_cases},
      {"feedback reduction oracle and reference network", feedback},
      {"Kalman-form BAE conditions", kalman},
      {"QND martingale and H=p^2 control", martingale},
      {"structural QND variables", qnd_variables},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL",
                index, name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
