// Copyright 2026 The ozo Authors.
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

namespace ozo {

enum class ErrorCode {
  kConfig,           // invalid user-supplied configuration
  kContract,         // precondition violated by the caller
  kDegenerateInput,  // numerically singular input (e.g. rank-deficient QR)
  kDiverged,         // non-finite or exploding objective/iterate
  kInfeasible,       // parameters outside every admissible region
  kUnavailable,      // quantity not defined for this problem
  kIo,
  kInternal,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when the objective returns a non-finite value. Carries the point.
class DivergedEvaluation : public Error {
 public:
  DivergedEvaluation(const std::string& what, std::vector<double> point)
      : Error(ErrorCode::kDiverged, what), point_(std::move(point)) {}

  const std::vector<double>& point() const noexcept { return point_; }

 private:
  std::vector<double> point_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorCode::kContract, what);
}

}  // namespace ozo
