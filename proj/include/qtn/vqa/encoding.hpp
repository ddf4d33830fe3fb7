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
/**
 * @file
 * Classical data encodings. Each produces a circuit prefix: gates to run
 * first, or an initial state.
 */
#pragma once

#include "qtn/circuit/circuit.hpp"

#include <optional>
#include <span>
#include <vector>

namespace qtn::vqa {

enum class EncodingKind { Basis, Amplitude, Angle };

struct EncodingSpec {
    EncodingKind kind = EncodingKind::Angle;
    int n_qubits = 1;
    /// Basis, Angle: n_qubits. Amplitude: at most 2^n_qubits (zero padded).
    std::size_t feature_length = 1;
};

struct CircuitPrefix {
    std::vector<GateInstance> gates;
    std::optional<std::vector<cplx>> init_state;
};

/// Throws FeatureLengthMismatch, ZeroVector (amplitude), InvalidArgument
/// (basis features other than 0 / 1).
CircuitPrefix encode(const EncodingSpec &spec, std::span<const double> features);

/// Bits of `value`, most significant first, as basis features for n qubits.
std::vector<double> basis_features(std::uint64_t value, int n_qubits);

} // namespace qtn::vqa
