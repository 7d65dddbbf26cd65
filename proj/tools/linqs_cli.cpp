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

// Command-line front end: linqs <command> <spec.json> [options].

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "linqs/spec_io.hpp"

namespace {

using namespace linqs;

struct Options {
  std::string command;
  std::string feedback_action;
  std::string spec_path;
  std::string form = "quad";
  std::vector<double> sweep;
  std::optional<double> tol;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<Index> fock_dim;
  std::optional<double> dt;
  std::optional<double> T;
  std::optional<int> traj;
  int threads = 1;
};

/// Writes the command's primary artifact to --out or stdout, and a
/// secondary report to stdout when --out is used, stderr otherwise.
class Output {
 public:
  explicit Output(const Options& o) : path_(o.out) {}

  void primary(const std::string& text) const {
    if (path_.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream f(path_, std::ios::binary);
    if (!f) throw PreconditionError("cannot write " + path_);
    f << text;
  }

  void secondary(const std::string& text) const {
    (path_.empty() ? std::cerr : std::cout) << text;
  }

 private:
  std::string path_;
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json header(const Options& o) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = o.feedback_action.empty() ? o.command
                                           : o.command + " " + o.feedback_action;
  j["spec"] = o.spec_path;
  return j;
}

Json validation_section(const std::vector<Violation>& v, double tol) {
  return {{"valid", v.empty()}, {"violations", to_json(v)}, {"tolerance", tol}};
}

/// Parses and validates the spec; prints the violations and throws on
/// failure.
QuantumLinearSystem checked_system(const SystemSpec& spec) {
  const auto violations = validate(spec.system);
  if (!violations.empty()) throw ValidationError(violations);
  return spec.system;
}

Json realization_json(const AcRealization& r) {
  return {{"form", "ac"},
          {"A", matrix_to_json(r.A)},
          {"B", matrix_to_json(r.B)},
          {"C", matrix_to_json(r.C)},
          {"D", matrix_to_json(r.D)}};
}

Json realization_json(const QuadRealization& r) {
  return {{"form", "quad"},
          {"A", matrix_to_json(r.A)},
          {"B", matrix_to_json(r.B)},
          {"C", matrix_to_json(r.C)},
          {"D", matrix_to_json(r.D)}};
}

std::vector<std::string> tf_columns(Index m, bool quad) {
  const char* quad_names[2] = {"q", "p"};
  const char* ac_names[2] = {"a", "ad"};
  const char** names = quad ? quad_names : ac_names;
  std::vector<std::string> cols;
  for (Index r = 0; r < 2 * m; ++r) {
    for (Index c = 0; c < 2 * m; ++c) {
      std::string block = std::string(names[r / m]) + (quad ? "" : "_") +
                          names[c / m];
      cols.push_back(block + "_" + std::to_string(r % m + 1) + "_" +
                     std::to_string(c % m + 1));
    }
  }
  return cols;
}

template <typename Scalar>
std::string sweep_csv(const Realization<Scalar>& r, const FrequencyGrid& grid,
                      Index m) {
  std::ostringstream csv;
  csv << std::setprecision(17) << "omega";
  for (const auto& c : tf_columns(m, r.form == Form::quadrature)) {
    csv << "," << c;
  }
  csv << "\n";
  for (const auto& pt : frequency_sweep(r, grid)) {
    csv << pt.omega;
    for (Index i = 0; i < pt.response.rows(); ++i) {
      for (Index j = 0; j < pt.response.cols(); ++j) {
        csv << "," << std::abs(pt.response(i, j));
      }
    }
    csv << "\n";
  }
  return csv.str();
}

int cmd_validate(const Options& o, const SystemSpec& spec) {
  const double tol = o.tol.value_or(kDefaultTol);
  const auto violations = validate(spec.system, tol);
  Json report = header(o);
  report["validation"] = validation_section(violations, tol);
  Output(o).primary(dump(report));
  if (violations.empty()) {
    std::cerr << "valid\n";
    return 0;
  }
  for (const auto& v : violations) {
    std::cerr << "invalid: " << v.field << ": " << v.invariant
              << " (residual " << v.residual << ")\n";
  }
  return 1;
}

int cmd_realize(const Options& o, const SystemSpec& spec) {
  const QuantumLinearSystem sys = checked_system(spec);
  Json report = header(o);
  report["realization"] =
      o.form == "ac" ? realization_json(ac_realization(sys))
                     : realization_json(quad_realization(
                           sys, o.tol.value_or(kEqualityTol)));
  Output(o).primary(dump(report));
  return 0;
}

int cmd_tf(const Options& o, const SystemSpec& spec) {
  const QuantumLinearSystem sys = checked_system(spec);
  FrequencyGrid grid;
  if (!o.sweep.empty()) {
    if (!(o.sweep[0] > 0 && o.sweep[1] > o.sweep[0] && o.sweep[2] >= 2 &&
          o.sweep[2] == std::floor(o.sweep[2]))) {
      throw PreconditionError(
          "--sweep needs 0 < wmin < wmax and an integer npts >= 2");
    }
    grid = {o.sweep[0], o.sweep[1], static_cast<int>(o.sweep[2])};
  }
  const std::string csv =
      o.form == "ac" ? sweep_csv(ac_realization(sys), grid, sys.channels)
                     : sweep_csv(quad_realization(sys), grid, sys.channels);
  Output(o).primary(csv);
  return 0;
}

int cmd_bae(const Options& o, const SystemSpec& spec) {
  const QuantumLinearSystem sys = checked_system(spec);
  const BAEReport bae = certify_bae(sys, o.tol.value_or(1e-10));
  Json report = header(o);
  report["validation"] = validation_section({}, kDefaultTol);
  report["bae"] = to_json(bae);
  Output(o).primary(dump(report));
  if (!bae.consistency) {
    throw ConsistencyError(
        "a matched condition's predicted pair was not certified");
  }
  return 0;
}

int cmd_qnd(const Options& o, const SystemSpec& spec) {
  const QuantumLinearSystem sys = checked_system(spec);
  const double tol = o.tol.value_or(1e-10);
  Json qnd;
  qnd["interaction"] = to_json(qnd_interaction(sys, tol));
  const CouplingProperties props = coupling_properties(sys, tol);
  qnd["coupling"] = {{"self_adjoint", props.self_adjoint},
                     {"mutually_commuting", props.mutually_commuting},
                     {"tolerance", tol}};
  qnd["variables"] = to_json(qnd_variable_report(sys, tol));
  if (sys.channels == 1) {
    Json siso = to_json(siso_analysis(sys, tol));
    siso["tolerance"] = tol;
    qnd["siso"] = siso;
  }
  Json report = header(o);
  report["validation"] = validation_section({}, kDefaultTol);
  report["qnd"] = qnd;
  Output(o).primary(dump(report));
  return 0;
}

int cmd_feedback_reduce(const Options& o, const SystemSpec& spec) {
  const double tol = o.tol.value_or(1e-9);
  const FeedbackNetwork net = network_from_spec(spec);
  const QuantumLinearSystem reduced = reduce_network(net);
  const ReductionCheck check = verify_reduction(net, tol);
  const CrossTermHamiltonian cross = cross_term_hamiltonian(net);

  Json report = header(o);
  report["feedback"] = {
      {"loop_condition", loop_condition(net)},
      {"oracle", to_json(check)},
      {"cross_term_hamiltonian",
       {{"Omega_minus", matrix_to_json(cross.Omega_minus)},
        {"Omega_plus", matrix_to_json(cross.Omega_plus)},
        {"hermitian_residual", cross.hermitian_residual},
        {"symmetric_residual", cross.symmetric_residual}}},
      {"reduced_bae", to_json(certify_bae(reduced))}};

  SystemSpec out_spec;
  out_spec.system = reduced;
  const Output out(o);
  out.primary(dump(to_json(out_spec)));
  out.secondary(dump(report));
  if (!check.passed) {
    throw ConsistencyError("reduced system disagrees with the closed loop");
  }
  return 0;
}

int cmd_feedback_design(const Options& o, const SystemSpec& spec) {
  if (!spec.feedback) throw PreconditionError("spec has no feedback section");
  const FeedbackSpec& f = *spec.feedback;
  const FeedbackNetwork base = network_from_spec(spec);
  SearchConfig cfg = f.search.value_or(SearchConfig{});
  if (o.seed) cfg.seed = *o.seed;
  cfg.threads = o.threads;
  cfg.S_G = spec.system.S;
  cfg.k11 = base.k11();
  cfg.k12 = base.k12();

  std::vector<CMatrix> beamsplitters = {f.S_b};
  for (const CMatrix& b : default_beamsplitters(f.m2)) {
    if (!b.isApprox(f.S_b)) beamsplitters.push_back(b);
  }
  const DesignResult result =
      design_couplings(spec.system.Omega_minus, spec.system.Omega_plus, f.m1,
                       f.m2, beamsplitters, cfg);

  Json report = header(o);
  report["feedback"] = to_json(result);
  report["feedback"]["threshold"] = cfg.threshold;
  const Output out(o);
  if (result.candidates.empty()) {
    out.secondary(dump(report));
    throw PreconditionError("no coupling design found: " + result.diagnostic);
  }
  SystemSpec out_spec;
  out_spec.system = result.candidates.front().reduced;
  out.primary(dump(to_json(out_spec)));
  out.secondary(dump(report));
  return 0;
}

int cmd_kalman(const Options& o, const SystemSpec& spec) {
  if (!spec.kalman) throw PreconditionError("spec has no kalman section");
  const double tol = o.tol.value_or(1e-10);
  const KalmanCoSubsystem k = kalman_from_spec(*spec.kalman);
  Json report = header(o);
  Json markov = to_json(markov_identity_check(k, 8, tol));
  markov["tolerance"] = tol;
  report["kalman"] = {{"bae", to_json(check_kalman_bae(k, tol))},
                      {"markov_identity", markov}};
  Output(o).primary(dump(report));
  return 0;
}

std::vector<TrackedObservable> tracked_observables(
    const TruncatedOperators& ops) {
  const CMatrix& L = ops.L_ops.front();
  const double herm = (L - L.adjoint()).norm();
  std::vector<TrackedObservable> out;
  if (herm <= 1e-9 * std::max(L.norm(), 1.0)) {
    int j = 0;
    for (const auto& c : spectral_projections(L)) {
      out.push_back({"P_" + std::to_string(++j), c.projector});
    }
    out.push_back({"L", L});
    out.push_back({"L2", L * L});
  } else {
    const CMatrix X = L + L.adjoint();
    out.push_back({"L_plus_Ldag", X});
    out.push_back({"L_plus_Ldag_2", X * X});
  }
  return out;
}

int cmd_simulate(const Options& o, const SystemSpec& spec) {
  const QuantumLinearSystem sys = checked_system(spec);
  SimSpec sim = spec.sim.value_or(SimSpec{});
  if (o.fock_dim) sim.fock_dim = *o.fock_dim;
  if (o.dt) sim.dt = *o.dt;
  if (o.T) sim.T = *o.T;
  if (o.traj) sim.n_traj = *o.traj;
  if (o.seed) sim.seed = *o.seed;
  if (sim.fock_dim < 2 || !(sim.dt > 0) || !(sim.T > 0) || sim.n_traj < 2) {
    throw PreconditionError(
        "simulate needs fock_dim >= 2, dt > 0, T > 0 and at least 2 "
        "trajectories");
  }

  const TruncatedOperators ops = build_truncated_operators(sys, sim.fock_dim);
  const CMatrix rho0 = diagonal_state(sim.initial_populations, ops.dim());
  SimulationConfig cfg;
  cfg.dt = sim.dt;
  cfg.T = sim.T;
  cfg.n_traj = sim.n_traj;
  cfg.seed = sim.seed;
  cfg.threads = o.threads;
  const SMETrajectoryBatch batch =
      simulate_qsme(ops, rho0, tracked_observables(ops), cfg);
  const MartingaleReport stats = martingale_stats(batch);

  std::ostringstream csv;
  csv << std::setprecision(17) << "time";
  for (const auto& s : stats.series) csv << ",mean_" << s.name << ",se_" << s.name;
  csv << "\n";
  for (size_t t = 0; t < batch.times.size(); ++t) {
    csv << batch.times[t];
    for (const auto& s : stats.series) csv << "," << s.mean[t] << "," << s.se[t];
    csv << "\n";
  }

  Json report = header(o);
  report["simulate"] = {{"fock_dim", sim.fock_dim},
                        {"dt", sim.dt},
                        {"T", sim.T},
                        {"n_traj", sim.n_traj},
                        {"seed", sim.seed},
                        {"max_trace_defect", batch.max_trace_defect},
                        {"max_edge_population", batch.max_edge_population},
                        {"warnings", batch.warnings},
                        {"martingale", to_json(stats)},
                        {"tolerance", "|drift| <= 3 (drift_se + allowance)"}};
  const Output out(o);
  out.primary(csv.str());
  out.secondary(dump(report));
  return 0;
}

int run(const Options& o) {
  const SystemSpec spec = load_spec(o.spec_path);
  if (o.command == "validate") return cmd_validate(o, spec);
  if (o.command == "realize") return cmd_realize(o, spec);
  if (o.command == "tf") return cmd_tf(o, spec);
  if (o.command == "bae") return cmd_bae(o, spec);
  if (o.command == "qnd") return cmd_qnd(o, spec);
  if (o.command == "feedback") {
    return o.feedback_action == "design" ? cmd_feedback_design(o, spec)
                                         : cmd_feedback_reduce(o, spec);
  }
  if (o.command == "kalman") return cmd_kalman(o, spec);
  if (o.command == "simulate") return cmd_simulate(o, spec);
  throw PreconditionError("unknown command " + o.command);
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Analysis of linear quantum systems: BAE, QND, feedback"};
  app.require_subcommand(1);
  app.add_option("--form", o.form, "Realization form")
      ->check(CLI::IsMember({"ac", "quad"}));
  app.add_option("--sweep", o.sweep, "wmin wmax npts")->expected(3);
  app.add_option("--tol", o.tol, "Tolerance override")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", o.out, "Output file");
  app.add_option("--seed", o.seed, "Random seed");
  app.add_option("--fock-dim", o.fock_dim, "Fock levels per mode");
  app.add_option("--dt", o.dt, "Time step");
  app.add_option("--T", o.T, "Final time");
  app.add_option("--traj", o.traj, "Number of trajectories");
  app.add_option("--threads", o.threads, "Worker threads")
      ->check(CLI::PositiveNumber);

  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->callback([&o, name] { o.command = name; });
    return sub;
  };
  add("validate", "Check a spec's invariants")
      ->add_option("spec", o.spec_path)->required();
  add("realize", "Print the state-space realization")
      ->add_option("spec", o.spec_path)->required();
  add("tf", "Transfer-function magnitude sweep as CSV")
      ->add_option("spec", o.spec_path)->required();
  add("bae", "Certify back-action-evading pairs")
      ->add_option("spec", o.spec_path)->required();
  add("qnd", "QND interaction and QND variables")
      ->add_option("spec", o.spec_path)->required();
  CLI::App* fb = add("feedback", "Coherent feedback: reduce or design");
  fb->add_option("action", o.feedback_action)
      ->required()
      ->check(CLI::IsMember({"reduce", "design"}));
  fb->add_option("spec", o.spec_path)->required();
  add("kalman", "BAE in the Kalman canonical form")
      ->add_option("spec", o.spec_path)->required();
  add("simulate", "Stochastic master equation trajectories")
      ->add_option("spec", o.spec_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (argc > 1 && argv[1][0] != '-' && !app.get_subcommand_no_throw(argv[1])) {
      std::cerr << "error: unknown command '" << argv[1]
                << "'; expected one of validate, realize, tf, bae, qnd, "
                   "feedback, kalman, simulate\n";
      return 1;
    }
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    return run(o);
  } catch (const ConsistencyError& e) {
    std::cerr << "consistency error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
