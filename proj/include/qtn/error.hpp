// Copyright 2026 The qtn Authors
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
#include <string_view>

namespace qtn {

enum class ErrorCode {
    InvalidArgument,
    QubitOutOfRange,
    EmptyMeasurement,
    BadInitStateLength,
    NonUnitNorm,
    SchemaViolation,
    UnsupportedMeasurementForMode,
    ParamLengthMismatch,
    TooManyQubits,
    PathSearchTimeout,
    Unsliceable,
    ShapeMismatch,
    OutOfMemoryBudget,
    TapeMissing,
    FourTermGateUnsupported,
    NonExpectationMeasurement,
    ParamCountMismatch,
    FeatureLengthMismatch,
    ZeroVector,
    UnknownTask,
    HamiltonianParseError,
    TooManyQubitsForExactEvolution,
};

std::string_view to_string(ErrorCode code);

/// Error type thrown by every qtn component. The code is stable and is what
/// the CLI and HTTP layers map onto exit codes / status codes.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

/// True for errors caused by malformed user input (as opposed to the engines).
bool is_input_error(ErrorCode code);

} // namespace qtn
