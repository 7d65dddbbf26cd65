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

#include "catch_amalgamated.hpp"
#include "linqs/xferfn.hpp"
#include "support/random_systems.hpp"

using namespace linqs;
using namespace linqs::testing;

namespace {

QuantumLinearSystem michelson() {
  CMatrix c(2, 2);
  c << kI, kI, kI, -kI;
  return make_system(CMatrix::Identity(2, 2), 0.5 * c, 0.5 * c,
                     CMatrix::Identity(2, 2), CMatrix::Zero(2, 2));
}

}  // namespace

TEST_CASE("eval_tf matches an explicit inverse") {
  Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    const QuadRealization r = quad_realization(random_system(rng, 2, 2));
    const cdouble s(0.2, 0.7 * t);
    const CMatrix direct =
        r.D.cast<cdouble>() +
        r.C.cast<cdouble>() *
            (s * CMatrix::Identity(4, 4) - r.A.cast<cdouble>()).inverse() *
            r.B.cast<cdouble>();
    CHECK(approx_equal(eval_tf(r, s), direct, 1e-10));
  }
}

TEST_CASE("eval_tf reports poles") {
  // The Michelson quadrature A has eigenvalues +-i.
  const QuadRealization r = quad_realization(michelson());
  CHECK_THROWS_AS(eval_tf(r, cdouble(0, 1)), SingularityError);
  CHECK_NOTHROW(eval_tf(r, cdouble(0, 1.3)));
}

TEST_CASE("markov_params are D, CB, CAB, ...") {
  Rng rng(32);
  const QuadRealization r = quad_realization(random_system(rng, 2, 1));
  const auto mp = markov_params(r, 5);
  REQUIRE(mp.size() == 5);
  CHECK(mp[0] == r.D);
  RMatrix ak = RMatrix::Identity(4, 4);
  for (int k = 1; k < 5; ++k) {
    CHECK(approx_equal(mp[k], RMatrix(r.C * ak * r.B)));
    ak = ak * r.A;
  }
  CHECK_THROWS_AS(markov_params(r, 0), PreconditionError);
}

TEST_CASE("Markov expansion reproduces G at large |s|") {
  Rng rng(33);
  const QuadRealization r = quad_realization(random_system(rng, 1, 1));
  const auto mp = markov_params(r, 30);
  const cdouble s(0, 50.0);
  CMatrix series = CMatrix::Zero(2, 2);
  cdouble sk = 1.0;
  for (const auto& m : mp) {
    series += m.cast<cdouble>() / sk;
    sk *= s;
  }
  CHECK(approx_equal(eval_tf(r, s), series, 1e-10));
}

TEST_CASE("frequency grid is log spaced") {
  const auto w = FrequencyGrid{1e-2, 1e2, 5}.omegas();
  REQUIRE(w.size() == 5);
  for (int k = 0; k < 5; ++k) {
    CHECK(std::abs(w[k] / std::pow(10.0, -2 + k) - 1) < 1e-12);
  }
  CHECK_THROWS_AS((FrequencyGrid{0.0, 1.0, 3}.omegas()), PreconditionError);
}

TEST_CASE("block_pattern certifies the Michelson qp block") {
  const BlockPattern p = block_pattern(quad_realization(michelson()));
  CHECK(p.qp.zero());
  CHECK_FALSE(p.qq.zero());
  CHECK_FALSE(p.pq.zero());
  CHECK_FALSE(p.pp.zero());
  CHECK(p.markov_horizon == 8);
  CHECK(p.qp.max_markov <= 1e-10 * p.scale);
  CHECK(p.qp.max_frequency <= 1e-10 * p.scale);
}

TEST_CASE("block_pattern finds nothing zero for generic systems") {
  Rng rng(34);
  for (int t = 0; t < 10; ++t) {
    const BlockPattern p = block_pattern(quad_realization(random_system(rng, 2, 2)));
    CHECK_FALSE((p.qq.zero() || p.qp.zero() || p.pq.zero() || p.pp.zero()));
  }
}

TEST_CASE("sigma_tf and G are related by a Cayley transform when S = I") {
  Rng rng(35);
  for (int t = 0; t < 10; ++t) {
    QuantumLinearSystem sys = random_system(rng, 2, 2);
    sys.S = CMatrix::Identity(2, 2);
    const cdouble s(0.4, 0.9 + t);
    const CMatrix sigma = sigma_tf(sys, s);
    const CMatrix id = CMatrix::Identity(4, 4);
    // Independent Sigma from its defining formula.
    const CMatrix c = sys.coupling();
    CMatrix j = CMatrix::Identity(4, 4);
    j.bottomRightCorner(2, 2) *= -1.0;
    const CMatrix c_flat = j * c.adjoint() * j;
    const CMatrix direct =
        0.5 * c * (s * id + kI * j * sys.hamiltonian()).inverse() * c_flat;
    CHECK(approx_equal(sigma, direct, 1e-10));
    const CMatrix g = eval_tf(ac_realization(sys), s);
    CHECK(approx_equal(g, CMatrix((id - sigma) * (id + sigma).inverse()), 1e-9));
  }
}
