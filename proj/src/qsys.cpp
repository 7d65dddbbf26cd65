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

#include "linqs/qsys.hpp"

#include <string>

namespace linqs {
namespace {

std::string shape(const CMatrix& x) {
  return std::to_string(x.rows()) + "x" + std::to_string(x.cols());
}

void check_shape(std::vector<Violation>& out, const char* field,
                 const CMatrix& x, Index rows, Index cols) {
  if (x.rows() != rows || x.cols() != cols) {
    out.push_back({field,
                   "shape " + shape(x) + ", expected " + std::to_string(rows) +
                       "x" + std::to_string(cols),
                   0.0});
  }
}

bool finite(const CMatrix& x) {
  return x.real().allFinite() && x.imag().allFinite();
}

RMatrix real_checked(const CMatrix& x, const char* what, double tol) {
  const double scale = std::max(1.0, norm_inf(x));
  const double residue = norm_inf(x.imag());
  if (residue > tol * scale) {
    throw ConsistencyError(std::string("quadrature ") + what +
                           " has imaginary residue " +
                           std::to_string(residue));
  }
  return x.real();
}

}  // namespace

std::vector<Violation> validate(const QuantumLinearSystem& sys, double tol) {
  std::vector<Violation> out;
  const Index n = sys.modes;
  const Index m = sys.channels;
  if (n < 1) out.push_back({"modes", "must be >= 1", 0.0});
  if (m < 1) out.push_back({"channels", "must be >= 1", 0.0});
  check_shape(out, "S", sys.S, m, m);
  check_shape(out, "C_minus", sys.C_minus, m, n);
  check_shape(out, "C_plus", sys.C_plus, m, n);
  check_shape(out, "Omega_minus", sys.Omega_minus, n, n);
  check_shape(out, "Omega_plus", sys.Omega_plus, n, n);
  if (!out.empty()) return out;

  const std::pair<const char*, const CMatrix*> all[] = {
      {"S", &sys.S},
      {"C_minus", &sys.C_minus},
      {"C_plus", &sys.C_plus},
      {"Omega_minus", &sys.Omega_minus},
      {"Omega_plus", &sys.Omega_plus}};
  for (const auto& [name, x] : all) {
    if (!finite(*x)) out.push_back({name, "non-finite entry", 0.0});
  }
  if (!out.empty()) return out;

  const double unitarity =
      norm_inf(sys.S * sys.S.adjoint() - CMatrix::Identity(m, m));
  if (unitarity > tol) out.push_back({"S", "not unitary", unitarity});

  const double herm = norm_inf(sys.Omega_minus - sys.Omega_minus.adjoint());
  if (herm > tol * std::max(1.0, norm_inf(sys.Omega_minus))) {
    out.push_back({"Omega_minus", "not Hermitian", herm});
  }
  const double symm = norm_inf(sys.Omega_plus - sys.Omega_plus.transpose());
  if (symm > tol * std::max(1.0, norm_inf(sys.Omega_plus))) {
    out.push_back({"Omega_plus", "not symmetric", symm});
  }
  return out;
}

QuantumLinearSystem make_system(CMatrix S, CMatrix C_minus, CMatrix C_plus,
                                CMatrix Omega_minus, CMatrix Omega_plus,
                                double tol) {
  QuantumLinearSystem sys;
  sys.modes = C_minus.cols();
  sys.channels = C_minus.rows();
  sys.S = std::move(S);
  sys.C_minus = std::move(C_minus);
  sys.C_plus = std::move(C_plus);
  sys.Omega_minus = std::move(Omega_minus);
  sys.Omega_plus = std::move(Omega_plus);
  if (auto v = validate(sys, tol); !v.empty()) throw ValidationError(v);
  return sys;
}

AcRealization ac_realization(const QuantumLinearSystem& sys) {
  const Index n = sys.modes;
  const Index m = sys.channels;
  const cdouble i(0.0, 1.0);
  AcRealization r;
  r.form = Form::annihilation_creation;
  r.C = sys.coupling();
  r.D = delta(sys.S, CMatrix::Zero(m, m));
  const CMatrix c_flat = flat_adjoint(r.C);
  r.B = -c_flat * r.D;
  r.A = -i * flat_metric(n).cast<cdouble>() * sys.hamiltonian() -
        0.5 * c_flat * r.C;
  return r;
}

RMatrix quadrature_hamiltonian(const QuantumLinearSystem& sys) {
  const Index n = sys.modes;
  const CMatrix jh = symplectic_form(n).cast<cdouble>() *
                     quadrature_image(sys.hamiltonian());
  return real_checked(jh, "JJ H", kEqualityTol);
}

QuadRealization quad_realization(const QuantumLinearSystem& sys, double tol) {
  const AcRealization ac = ac_realization(sys);
  QuadRealization r;
  r.form = Form::quadrature;
  r.A = real_checked(quadrature_image(ac.A), "A", tol);
  r.B = real_checked(quadrature_image(ac.B), "B", tol);
  r.C = real_checked(quadrature_image(ac.C), "C", tol);
  r.D = real_checked(quadrature_image(ac.D), "D", tol);

  // Explicit block formulas as an independent route.
  const CMatrix& cm = sys.C_minus;
  const CMatrix& cp = sys.C_plus;
  const RMatrix d_blocks = passive_quadrature(sys.S);
  RMatrix c_blocks(r.C.rows(), r.C.cols());
  c_blocks << (cm + cp).real(), -(cm - cp).imag(), (cm + cp).imag(),
      (cm - cp).real();
  const CMatrix cmh = cm.adjoint();
  const CMatrix cph = cp.adjoint();
  RMatrix b_left(r.B.rows(), r.B.cols());
  b_left << (cmh - cph).real(), -(cmh - cph).imag(), (cmh + cph).imag(),
      (cmh + cph).real();
  const RMatrix b_blocks = -b_left * d_blocks;
  const RMatrix a_blocks =
      quadrature_hamiltonian(sys) - 0.5 * sharp_adjoint(c_blocks) * c_blocks;

  const std::pair<const char*, bool> checks[] = {
      {"D", approx_equal(r.D, d_blocks, tol)},
      {"C", approx_equal(r.C, c_blocks, tol)},
      {"B", approx_equal(r.B, b_blocks, tol)},
      {"A", approx_equal(r.A, a_blocks, tol)}};
  for (const auto& [name, ok] : checks) {
    if (!ok) {
      throw ConsistencyError(std::string("quadrature ") + name +
                             " disagrees with its block formula");
    }
  }
  return r;
}

}  // namespace linqs
