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

#include "linqs/spec_io.hpp"

#include <fstream>
#include <sstream>

namespace linqs {
namespace {

std::string at(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string at(const std::string& path, size_t index) {
  return path + "[" + std::to_string(index) + "]";
}

cdouble complex_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ParseError(path, "expected a number or [re, im]");
}

const Json& require(const Json& obj, const std::string& key,
                    const std::string& path) {
  if (!obj.contains(key)) throw ParseError(at(path, key), "missing field");
  return obj.at(key);
}

Index count_from_json(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ParseError(path, "expected a non-negative integer");
  }
  return static_cast<Index>(j.get<long long>());
}

double number_from_json(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  return j.get<double>();
}

CMatrix beamsplitter_from_json(const Json& j, Index m2,
                               const std::string& path) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const CMatrix id = CMatrix::Identity(m2, m2);
    if (s == "I") return id;
    if (s == "iI") return cdouble(0.0, 1.0) * id;
    if (s == "-iI") return cdouble(0.0, -1.0) * id;
    throw ParseError(path, "expected \"I\", \"iI\", \"-iI\" or a matrix");
  }
  return complex_matrix_from_json(j, path);
}

template <typename T>
void put_optional(Json& j, const char* key, const std::optional<T>& x) {
  if (x) j[key] = matrix_to_json(*x);
}

Json pair_to_json(const QuadraturePair& p) { return to_string(p); }

Json certificate_to_json(const BlockCertificate& c) {
  return {{"status", to_string(c.status)},
          {"max_markov", c.max_markov},
          {"max_frequency", c.max_frequency}};
}

Json verdict_to_json(const QuadratureVerdict& v) {
  Json w = Json::array();
  for (const auto& x : v.witnesses) {
    w.push_back({{"pair", x.pair},
                 {"rank", x.rank},
                 {"required", x.required},
                 {"observable", x.passed()}});
  }
  return {{"is_qnd", v.is_qnd},
          {"structural_rows_zero", v.structural_rows_zero},
          {"observability", w}};
}

}  // namespace

Json complex_to_json(cdouble z) { return Json::array({z.real(), z.imag()}); }

Json matrix_to_json(const CMatrix& x) {
  Json rows = Json::array();
  for (Index i = 0; i < x.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < x.cols(); ++j) row.push_back(complex_to_json(x(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Json matrix_to_json(const RMatrix& x) {
  Json rows = Json::array();
  for (Index i = 0; i < x.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < x.cols(); ++j) row.push_back(x(i, j));
    rows.push_back(row);
  }
  return rows;
}

CMatrix complex_matrix_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array of rows");
  if (j.empty()) return CMatrix(0, 0);
  const size_t cols = j[0].is_array() ? j[0].size() : 0;
  CMatrix out(j.size(), cols);
  for (size_t r = 0; r < j.size(); ++r) {
    const Json& row = j[r];
    if (!row.is_array()) throw ParseError(at(path, r), "expected a row array");
    if (row.size() != cols) {
      throw ParseError(at(path, r), "row has " + std::to_string(row.size()) +
                                        " entries, expected " +
                                        std::to_string(cols));
    }
    for (size_t c = 0; c < cols; ++c) {
      out(r, c) = complex_from_json(row[c], at(at(path, r), c));
    }
  }
  return out;
}

RMatrix real_matrix_from_json(const Json& j, const std::string& path) {
  const CMatrix x = complex_matrix_from_json(j, path);
  if (x.size() > 0 && x.imag().cwiseAbs().maxCoeff() != 0.0) {
    throw ParseError(path, "expected real entries");
  }
  return x.real();
}

SystemSpec parse_spec(const Json& doc) {
  if (!doc.is_object()) throw ParseError("$", "expected a JSON object");
  SystemSpec spec;
  QuantumLinearSystem& sys = spec.system;
  sys.modes = count_from_json(require(doc, "modes", ""), "modes");
  sys.channels = count_from_json(require(doc, "channels", ""), "channels");
  sys.S = complex_matrix_from_json(require(doc, "S", ""), "S");
  sys.C_minus = complex_matrix_from_json(require(doc, "C_minus", ""), "C_minus");
  sys.C_plus = complex_matrix_from_json(require(doc, "C_plus", ""), "C_plus");
  sys.Omega_minus =
      complex_matrix_from_json(require(doc, "Omega_minus", ""), "Omega_minus");
  sys.Omega_plus =
      complex_matrix_from_json(require(doc, "Omega_plus", ""), "Omega_plus");

  if (doc.contains("feedback")) {
    const Json& f = doc.at("feedback");
    const std::string p = "feedback";
    if (!f.is_object()) throw ParseError(p, "expected an object");
    FeedbackSpec fb;
    const Json& split = require(f, "split", p);
    if (split.is_array() && split.size() == 2) {
      fb.m1 = count_from_json(split[0], at(p, "split[0]"));
      fb.m2 = count_from_json(split[1], at(p, "split[1]"));
    } else {
      fb.m1 = count_from_json(split, at(p, "split"));
      fb.m2 = sys.channels - fb.m1;
    }
    if (fb.m1 < 1 || fb.m2 < 1 || fb.m1 + fb.m2 != sys.channels) {
      throw ParseError(at(p, "split"),
                       "must split the channels into two non-empty groups");
    }
    fb.S_b = f.contains("beamsplitter")
                 ? beamsplitter_from_json(f.at("beamsplitter"), fb.m2,
                                          at(p, "beamsplitter"))
                 : CMatrix::Identity(fb.m2, fb.m2);
    for (const char* key : {"k11", "k12", "k21", "k22"}) {
      if (!f.contains(key)) continue;
      const CMatrix k = complex_matrix_from_json(f.at(key), at(p, key));
      const std::string name(key);
      if (name == "k11") fb.k11 = k;
      if (name == "k12") fb.k12 = k;
      if (name == "k21") fb.k21 = k;
      if (name == "k22") fb.k22 = k;
    }
    if (f.contains("search")) {
      const Json& s = f.at("search");
      const std::string sp = at(p, "search");
      SearchConfig cfg;
      if (s.contains("starts")) {
        cfg.starts = int(count_from_json(s.at("starts"), at(sp, "starts")));
      }
      if (s.contains("iterations")) {
        cfg.iterations =
            int(count_from_json(s.at("iterations"), at(sp, "iterations")));
      }
      if (s.contains("threshold")) {
        cfg.threshold = number_from_json(s.at("threshold"), at(sp, "threshold"));
      }
      if (s.contains("seed")) {
        cfg.seed = count_from_json(s.at("seed"), at(sp, "seed"));
      }
      fb.search = cfg;
    }
    spec.feedback = fb;
  }

  if (doc.contains("kalman")) {
    const Json& k = doc.at("kalman");
    const std::string p = "kalman";
    if (!k.is_object()) throw ParseError(p, "expected an object");
    KalmanSpec ks;
    if (k.contains("A_co")) ks.A_co = real_matrix_from_json(k.at("A_co"), at(p, "A_co"));
    if (k.contains("B_co")) ks.B_co = real_matrix_from_json(k.at("B_co"), at(p, "B_co"));
    if (k.contains("C_co")) ks.C_co = real_matrix_from_json(k.at("C_co"), at(p, "C_co"));
    if (k.contains("Gamma_q")) {
      ks.gamma_q = complex_matrix_from_json(k.at("Gamma_q"), at(p, "Gamma_q"));
    }
    if (k.contains("Gamma_p")) {
      ks.gamma_p = complex_matrix_from_json(k.at("Gamma_p"), at(p, "Gamma_p"));
    }
    if (k.contains("Gamma_h_nonzero")) {
      if (!k.at("Gamma_h_nonzero").is_boolean()) {
        throw ParseError(at(p, "Gamma_h_nonzero"), "expected a boolean");
      }
      ks.gamma_h_nonzero = k.at("Gamma_h_nonzero").get<bool>();
    }
    spec.kalman = ks;
  }

  if (doc.contains("sim")) {
    const Json& s = doc.at("sim");
    const std::string p = "sim";
    if (!s.is_object()) throw ParseError(p, "expected an object");
    SimSpec ss;
    if (s.contains("fock_dim")) ss.fock_dim = count_from_json(s.at("fock_dim"), at(p, "fock_dim"));
    if (s.contains("dt")) ss.dt = number_from_json(s.at("dt"), at(p, "dt"));
    if (s.contains("T")) ss.T = number_from_json(s.at("T"), at(p, "T"));
    if (s.contains("n_traj")) ss.n_traj = int(count_from_json(s.at("n_traj"), at(p, "n_traj")));
    if (s.contains("seed")) ss.seed = count_from_json(s.at("seed"), at(p, "seed"));
    if (s.contains("initial_populations")) {
      const Json& pops = s.at("initial_populations");
      if (!pops.is_array()) {
        throw ParseError(at(p, "initial_populations"), "expected an array");
      }
      ss.initial_populations.clear();
      for (size_t i = 0; i < pops.size(); ++i) {
        ss.initial_populations.push_back(
            number_from_json(pops[i], at(at(p, "initial_populations"), i)));
      }
    }
    spec.sim = ss;
  }
  return spec;
}

SystemSpec parse_spec_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Report the 1-based line of the failing byte.
    const size_t byte = std::min(e.byte, text.size());
    const long line = 1 + std::count(text.begin(), text.begin() + byte, '\n');
    throw ParseError("line " + std::to_string(line), e.what());
  }
  return parse_spec(doc);
}

SystemSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_spec_text(buf.str());
}

Json to_json(const SystemSpec& spec) {
  const QuantumLinearSystem& sys = spec.system;
  Json j;
  j["modes"] = sys.modes;
  j["channels"] = sys.channels;
  j["S"] = matrix_to_json(sys.S);
  j["C_minus"] = matrix_to_json(sys.C_minus);
  j["C_plus"] = matrix_to_json(sys.C_plus);
  j["Omega_minus"] = matrix_to_json(sys.Omega_minus);
  j["Omega_plus"] = matrix_to_json(sys.Omega_plus);
  if (spec.feedback) {
    const FeedbackSpec& f = *spec.feedback;
    Json fj;
    fj["split"] = Json::array({f.m1, f.m2});
    fj["beamsplitter"] = matrix_to_json(f.S_b);
    put_optional(fj, "k11", f.k11);
    put_optional(fj, "k12", f.k12);
    put_optional(fj, "k21", f.k21);
    put_optional(fj, "k22", f.k22);
    if (f.search) {
      fj["search"] = {{"starts", f.search->starts},
                      {"iterations", f.search->iterations},
                      {"threshold", f.search->threshold},
                      {"seed", f.search->seed}};
    }
    j["feedback"] = fj;
  }
  if (spec.kalman) {
    const KalmanSpec& k = *spec.kalman;
    Json kj = Json::object();
    put_optional(kj, "A_co", k.A_co);
    put_optional(kj, "B_co", k.B_co);
    put_optional(kj, "C_co", k.C_co);
    put_optional(kj, "Gamma_q", k.gamma_q);
    put_optional(kj, "Gamma_p", k.gamma_p);
    if (k.gamma_h_nonzero) kj["Gamma_h_nonzero"] = *k.gamma_h_nonzero;
    j["kalman"] = kj;
  }
  if (spec.sim) {
    const SimSpec& s = *spec.sim;
    j["sim"] = {{"fock_dim", s.fock_dim},
                {"dt", s.dt},
                {"T", s.T},
                {"n_traj", s.n_traj},
                {"seed", s.seed},
                {"initial_populations", s.initial_populations}};
  }
  return j;
}

FeedbackNetwork network_from_spec(const SystemSpec& spec, double tol) {
  if (!spec.feedback) {
    throw PreconditionError("spec has no feedback section");
  }
  const FeedbackSpec& f = *spec.feedback;
  const QuantumLinearSystem& g = spec.system;
  auto rows = [&](const CMatrix& c, Index first, Index count) {
    if (c.rows() != g.channels) {
      throw DimensionError("coupling matrix does not have one row per channel");
    }
    return CMatrix(c.middleRows(first, count));
  };
  return make_network(g.Omega_minus, g.Omega_plus,
                      f.k11 ? *f.k11 : rows(g.C_minus, 0, f.m1),
                      f.k12 ? *f.k12 : rows(g.C_plus, 0, f.m1),
                      f.k21 ? *f.k21 : rows(g.C_minus, f.m1, f.m2),
                      f.k22 ? *f.k22 : rows(g.C_plus, f.m1, f.m2), f.S_b, g.S,
                      tol);
}

KalmanCoSubsystem kalman_from_spec(const KalmanSpec& spec) {
  if (spec.gamma_q && spec.gamma_p && !spec.C_co) {
    KalmanCoSubsystem k = kalman_from_gamma(*spec.gamma_q, *spec.gamma_p,
                                            spec.A_co);
    if (spec.B_co) k.B_co = *spec.B_co;
    k.gamma_h_nonzero = spec.gamma_h_nonzero;
    return k;
  }
  if (!spec.B_co || !spec.C_co) {
    throw PreconditionError(
        "kalman section needs B_co and C_co, or Gamma_q and Gamma_p");
  }
  KalmanCoSubsystem k;
  k.B_co = *spec.B_co;
  k.C_co = *spec.C_co;
  k.A_co = spec.A_co ? *spec.A_co : RMatrix(0.5 * k.B_co * k.C_co);
  k.gamma_q = spec.gamma_q;
  k.gamma_p = spec.gamma_p;
  k.gamma_h_nonzero = spec.gamma_h_nonzero;
  return k;
}

Json to_json(const std::vector<Violation>& violations) {
  Json out = Json::array();
  for (const auto& v : violations) {
    out.push_back({{"field", v.field},
                   {"invariant", v.invariant},
                   {"residual", v.residual}});
  }
  return out;
}

Json to_json(const BlockPattern& p) {
  return {{"qq", certificate_to_json(p.qq)},
          {"qp", certificate_to_json(p.qp)},
          {"pq", certificate_to_json(p.pq)},
          {"pp", certificate_to_json(p.pp)},
          {"tolerance", p.tol},
          {"scale", p.scale},
          {"markov_horizon", p.markov_horizon}};
}

Json to_json(const BAEReport& r) {
  Json pairs = Json::array();
  for (const auto& p : r.certified_pairs) pairs.push_back(pair_to_json(p));
  Json matched = Json::array();
  for (const auto& m : r.matched_conditions) {
    Json predicted = Json::array();
    for (const auto& p : m.predicted_pairs) predicted.push_back(pair_to_json(p));
    matched.push_back({{"condition_id", m.id},
                       {"hypotheses_checked", m.hypotheses_checked},
                       {"predicted_pairs", predicted}});
  }
  return {{"certified_pairs", pairs},
          {"matched_conditions", matched},
          {"consistency", r.consistency},
          {"block_pattern", to_json(r.pattern)},
          {"tolerance", r.tol}};
}

Json to_json(const QndInteraction& q) {
  return {{"holds", q.holds},
          {"commutator_residual", q.commutator_residual},
          {"equation_residual", q.equation_residual},
          {"doubled_residual", q.doubled_residual},
          {"coupling_hamiltonian_residual", q.coupling_hamiltonian_residual},
          {"scale", q.scale},
          {"tolerance", q.tol}};
}

Json to_json(const QNDVariableReport& r) {
  return {{"case_matched", r.case_matched},
          {"q", verdict_to_json(r.q)},
          {"p", verdict_to_json(r.p)},
          {"tolerance", r.tol}};
}

Json to_json(const SisoAnalysis& s) {
  return {{"g", s.g},
          {"q_commutes", s.q_commutes},
          {"p_commutes", s.p_commutes},
          {"which_quadrature", to_string(s.which_quadrature)},
          {"unit_scattering", s.unit_scattering}};
}

Json to_json(const ReductionCheck& c) {
  return {{"max_deviation", c.max_deviation},
          {"frequencies", c.omegas.size()},
          {"passed", c.passed},
          {"tolerance", c.tol}};
}

Json to_json(const DesignResult& d) {
  Json cands = Json::array();
  for (const auto& c : d.candidates) {
    cands.push_back({{"S_b", matrix_to_json(c.S_b)},
                     {"k11", matrix_to_json(c.k11)},
                     {"k12", matrix_to_json(c.k12)},
                     {"k21", matrix_to_json(c.k21)},
                     {"k22", matrix_to_json(c.k22)},
                     {"objective", c.objective},
                     {"reduced_Omega_minus",
                      matrix_to_json(c.reduced.Omega_minus)},
                     {"reduced_Omega_plus",
                      matrix_to_json(c.reduced.Omega_plus)},
                     {"reduced_C_minus", matrix_to_json(c.reduced.C_minus)},
                     {"reduced_C_plus", matrix_to_json(c.reduced.C_plus)},
                     {"bae", to_json(c.bae)}});
  }
  return {{"candidates", cands},
          {"best_objective", d.best_objective},
          {"best_start_objective", d.best_start_objective},
          {"diagnostic", d.diagnostic}};
}

Json to_json(const KalmanBAE& k) {
  Json j = {{"q_wrt_p", k.q_wrt_p},
            {"p_wrt_q", k.p_wrt_q},
            {"qp_residual", k.qp_residual},
            {"pq_residual", k.pq_residual},
            {"scale", k.scale},
            {"tolerance", k.tol}};
  if (k.re_gamma_q_re_gamma_p_symmetric) {
    j["re_gamma_q_re_gamma_p_symmetric"] = *k.re_gamma_q_re_gamma_p_symmetric;
  }
  if (k.im_gamma_q_im_gamma_p_symmetric) {
    j["im_gamma_q_im_gamma_p_symmetric"] = *k.im_gamma_q_im_gamma_p_symmetric;
  }
  if (k.gamma_mismatch) j["gamma_mismatch"] = *k.gamma_mismatch;
  if (k.re_gamma_product_symmetric) {
    j["re_gamma_product_symmetric"] = *k.re_gamma_product_symmetric;
  }
  if (k.qnd_variables) j["qnd_variables"] = *k.qnd_variables;
  return j;
}

Json to_json(const MarkovIdentity& m) {
  return {{"premise_residual", m.premise_residual},
          {"premise_holds", m.premise_holds},
          {"max_residual", m.max_residual},
          {"scale", m.scale}};
}

Json to_json(const MartingaleReport& m) {
  Json series = Json::array();
  for (const auto& s : m.series) {
    series.push_back({{"name", s.name},
                      {"drift", s.drift},
                      {"drift_se", s.drift_se},
                      {"allowance", s.allowance},
                      {"max_checkpoint_z", s.max_checkpoint_z},
                      {"pass", s.pass}});
  }
  return {{"series", series}, {"all_pass", m.all_pass}};
}

}  // namespace linqs
