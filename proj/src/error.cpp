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
#include "qtn/error.hpp"

namespace qtn {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::QubitOutOfRange: return "QubitOutOfRange";
    case ErrorCode::EmptyMeasurement: return "EmptyMeasurement";
    case ErrorCode::BadInitStateLength: return "BadInitStateLength";
    case ErrorCode::NonUnitNorm: return "NonUnitNorm";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::UnsupportedMeasurementForMode:
        return "UnsupportedMeasurementForMode";
    case ErrorCode::ParamLengthMismatch: return "ParamLengthMismatch";
    case ErrorCode::TooManyQubits: return "TooManyQubits";
    case ErrorCode::PathSearchTimeout: return "PathSearchTimeout";
    case ErrorCode::Unsliceable: return "Unsliceable";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::OutOfMemoryBudget: return "OutOfMemoryBudget";
    case ErrorCode::TapeMissing: return "TapeMissing";
    case ErrorCode::FourTermGateUnsupported: return "FourTermGateUnsupported";
    case ErrorCode::NonExpectationMeasurement:
        return "NonExpectationMeasurement";
    case ErrorCode::ParamCountMismatch: return "ParamCountMismatch";
    case ErrorCode::FeatureLengthMismatch: return "FeatureLengthMismatch";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::UnknownTask: return "UnknownTask";
    case ErrorCode::HamiltonianParseError: return "HamiltonianParseError";
    case ErrorCode::TooManyQubitsForExactEvolution:
        return "TooManyQubitsForExactEvolution";
    }
    return "Unknown";
}

bool is_input_error(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::QubitOutOfRange:
    case ErrorCode::EmptyMeasurement:
    case ErrorCode::BadInitStateLength:
    case ErrorCode::NonUnitNorm:
    case ErrorCode::SchemaViolation:
    case ErrorCode::ParamLengthMismatch:
    case ErrorCode::ParamCountMismatch:
    case ErrorCode::FeatureLengthMismatch:
    case ErrorCode::ZeroVector:
    case ErrorCode::UnknownTask:
    case ErrorCode::HamiltonianParseError:
        return true;
    default:
        return false;
    }
}

} // namespace qtn
