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

// JSON system-spec files and report serialization.
//
// Complex scalars are [re, im] pairs (bare numbers are read as real);
// matrices are arrays of rows.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "linqs/bae.hpp"
#include "linqs/feedback.hpp"
#include "linqs/kalman.hpp"
#include "linqs/qnd.hpp"
#include "linqs/sme.hpp"

namespace linqs {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Malformed spec text or field; `where` is a JSON path or a byte offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : Error(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

struct FeedbackSpec {
  Index m1 = 0;
  Index m2 = 0;
  CMatrix S_b;
  /// Override the plant's coupling rows; k11, k12 also fix the external
  /// couplings during design.
  std::optional<CMatrix> k11, k12, k21, k22;
  std::optional<SearchConfig> search;
};

struct KalmanSpec {
  std::optional<RMatrix> A_co, B_co, C_co;
  std::optional<CMatrix> gamma_q, gamma_p;
  std::optional<bool> gamma_h_nonzero;
};

struct SimSpec {
  Index fock_dim = 8;
  double dt = 1e-3;
  double T = 1.0;
  int n_traj = 100;
  std::uint64_t seed = 1;
  std::vector<double> initial_populations{1.0};
};

struct SystemSpec {
  QuantumLinearSystem system;
  std::optional<FeedbackSpec> feedback;
  std::optional<KalmanSpec> kalman;
  std::optional<SimSpec> sim;
};

/// Structural parse only; the system is not validated.
SystemSpec parse_spec(const Json& doc);
SystemSpec parse_spec_text(const std::string& text);
SystemSpec load_spec(const std::string& path);

Json to_json(const SystemSpec& spec);

Json complex_to_json(cdouble z);
Json matrix_to_json(const CMatrix& x);
Json matrix_to_json(const RMatrix& x);
CMatrix complex_matrix_from_json(const Json& j, const std::string& path);
RMatrix real_matrix_from_json(const Json& j, const std::string& path);

/// The network described by a spec's plant and feedback section.
FeedbackNetwork network_from_spec(const SystemSpec& spec,
                                  double tol = kDefaultTol);
KalmanCoSubsystem kalman_from_spec(const KalmanSpec& spec);

Json to_json(const std::vector<Violation>& violations);
Json to_json(const BlockPattern& p);
Json to_json(const BAEReport& r);
Json to_json(const QndInteraction& q);
Json to_json(const QNDVariableReport& r);
Json to_json(const SisoAnalysis& s);
Json to_json(const ReductionCheck& c);
Json to_json(const DesignResult& d);
Json to_json(const KalmanBAE& k);
Json to_json(const MarkovIdentity& m);
Json to_json(const MartingaleReport& m);

}  // namespace linqs
