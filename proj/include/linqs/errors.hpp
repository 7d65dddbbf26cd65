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

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace linqs {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix shapes do not conform.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside the hypotheses it is defined for.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// One violated invariant of an input parameter set.
struct Violation {
  std::string field;
  std::string invariant;
  double residual = 0.0;
};

/// A parameter set failed validation. Carries every violated invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : Error(summarize(violations)), violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string summarize(const std::vector<Violation>& v) {
    std::string out = "validation failed:";
    for (const auto& x : v) out += " [" + x.field + ": " + x.invariant + "]";
    return out;
  }
  std::vector<Violation> violations_;
};

/// sI - A is numerically singular at the requested point.
class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

/// Two routes that must agree algebraically did not.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// The feedback loop I - S22*Sb is not invertible.
class WellPosednessError : public PreconditionError {
 public:
  WellPosednessError(const std::string& what, double condition)
      : PreconditionError(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

/// A derived system failed re-validation; residuals are attached.
class StructureError : public Error {
 public:
  explicit StructureError(std::vector<Violation> residuals)
      : Error(ValidationError(residuals).what()),
        residuals_(std::move(residuals)) {}
  const std::vector<Violation>& residuals() const { return residuals_; }

 private:
  std::vector<Violation> residuals_;
};

/// A requested problem size exceeds a hard cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Stochastic integration lost positivity beyond the repair budget.
class InstabilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace linqs
